#include "flowmine/serialize.hpp"

#include <cmath>
#include <sstream>

#include "flowmine/errors.hpp"
#include "json.hpp"

namespace flowmine {

using nlohmann::json;
using nlohmann::ordered_json;

RoleConfig parse_roles_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("roles file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("initial") || !doc.contains("terminal"))
    throw ConfigError("roles file must be an object with 'initial' and 'terminal' arrays");

  RoleConfig roles;
  auto read = [&](const char* field, std::vector<Message>& out) {
    const json& arr = doc.at(field);
    if (!arr.is_array()) throw ConfigError(std::string("roles '") + field + "' must be an array");
    for (const auto& item : arr) {
      if (!item.is_string()) throw ConfigError(std::string("roles '") + field + "' entries must be strings");
      try {
        out.push_back(parse_message(item.get<std::string>()));
      } catch (const ParseError& e) {
        throw ConfigError(std::string("roles '") + field + "': " + e.what());
      }
    }
  };
  read("initial", roles.initial);
  read("terminal", roles.terminal);
  if (roles.initial.empty() || roles.terminal.empty())
    throw ConfigError("roles 'initial' and 'terminal' must be non-empty");
  return roles;
}

std::string roles_json(const RoleConfig& roles) {
  ordered_json doc;
  doc["initial"] = json::array();
  doc["terminal"] = json::array();
  for (const auto& m : roles.initial) doc["initial"].push_back(to_string(m));
  for (const auto& m : roles.terminal) doc["terminal"].push_back(to_string(m));
  return doc.dump(2) + "\n";
}

std::string model_json(const MessageTable& table, const MineResult& result) {
  ordered_json doc;
  doc["size"] = result.model.size();
  doc["flows"] = json::array();
  for (const auto& flow : result.model.flows) {
    ordered_json f;
    f["messages"] = json::array();
    for (MsgId m : flow.msgs) f["messages"].push_back(to_string(table.message(m)));
    f["energy"] = flow.energy;
    f["instances"] = flow.instances;
    doc["flows"].push_back(std::move(f));
  }
  return doc.dump(2) + "\n";
}

std::string report_json(const MineResult& result) {
  const AcceptanceReport& r = result.report;
  ordered_json doc;
  doc["aggregate_ratio"] = r.aggregate_ratio;
  doc["mean_trace_ratio"] = r.mean_trace_ratio;
  doc["model_size"] = result.model.size();
  doc["runtime_seconds"] = r.runtime_seconds;
  doc["histogram"] = json::array();
  for (const auto& [len, count] : r.histogram) {
    ordered_json row;
    row["path_length"] = len;
    row["instances"] = count;
    doc["histogram"].push_back(std::move(row));
  }
  doc["traces"] = json::array();
  for (const auto& te : r.traces) {
    ordered_json t;
    t["id"] = te.trace_id;
    t["events"] = te.events;
    t["accepted"] = te.accepted.size();
    t["unaccepted"] = te.unaccepted.size();
    t["ratio"] = te.ratio;
    doc["traces"].push_back(std::move(t));
  }
  return doc.dump(2) + "\n";
}

std::string patterns_json(const MessageTable& table, const LocalMiningResult& local) {
  ordered_json doc;
  doc["valid"] = json::array();
  doc["invalid"] = json::array();
  doc["uncovered"] = json::array();
  for (const auto& p : local.patterns) {
    ordered_json row;
    row["src"] = to_string(table.message(p.key.src));
    row["dst"] = to_string(table.message(p.key.dst));
    row["fc"] = p.fc;
    row["bc"] = p.bc;
    row["matches"] = p.freq_pair;
    row["mean_distance"] = p.mean_dist;
    doc[p.valid ? "valid" : "invalid"].push_back(std::move(row));
  }
  for (MsgId m : local.uncovered) doc["uncovered"].push_back(to_string(table.message(m)));
  return doc.dump(2) + "\n";
}

std::string model_dot(const MessageTable& table, const FlowModel& model) {
  std::ostringstream os;
  os << "digraph model {\n  rankdir=LR;\n  node [shape=box, fontname=\"monospace\"];\n";
  for (std::size_t i = 0; i < model.flows.size(); ++i) {
    const Flow& flow = model.flows[i];
    os << "  subgraph cluster_" << i << " {\n    label=\"flow " << i << " (x" << flow.instances
       << ")\";\n";
    for (std::size_t k = 0; k < flow.msgs.size(); ++k)
      os << "    f" << i << "_" << k << " [label=\"" << to_string(table.message(flow.msgs[k]))
         << "\"];\n";
    for (std::size_t k = 0; k + 1 < flow.msgs.size(); ++k)
      os << "    f" << i << "_" << k << " -> f" << i << "_" << k + 1 << ";\n";
    os << "  }\n";
  }
  os << "}\n";
  return os.str();
}

std::string histogram_csv(const AcceptanceReport& report) {
  std::string out = "path_length,instance_count\n";
  for (const auto& [len, count] : report.histogram)
    out += std::to_string(len) + "," + std::to_string(count) + "\n";
  return out;
}

}  // namespace flowmine
