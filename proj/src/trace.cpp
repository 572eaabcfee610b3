#include "flowmine/trace.hpp"

#include <fstream>
#include <sstream>
#include <utility>

#include "flowmine/errors.hpp"

namespace flowmine {

std::uint32_t MessageTable::intern_component(const std::string& name) {
  auto it = comp_by_name_.find(name);
  if (it != comp_by_name_.end()) return it->second;
  std::uint32_t id = static_cast<std::uint32_t>(components_.size());
  components_.push_back(name);
  comp_by_name_.emplace(name, id);
  return id;
}

MsgId MessageTable::intern(const Message& m) {
  std::string text = to_string(m);
  auto it = by_text_.find(text);
  if (it != by_text_.end()) return it->second;
  MsgId id = static_cast<MsgId>(messages_.size());
  messages_.push_back(m);
  src_comp_.push_back(intern_component(m.src));
  dest_comp_.push_back(intern_component(m.dest));
  by_text_.emplace(std::move(text), id);
  return id;
}

std::optional<MsgId> MessageTable::find(const Message& m) const {
  auto it = by_text_.find(to_string(m));
  if (it == by_text_.end()) return std::nullopt;
  return it->second;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

Trace& TraceSet::add_from_text(std::string_view text, std::string id) {
  Trace t;
  t.id = std::move(id);

  std::size_t line_no = 0;
  std::size_t begin = 0;
  while (begin <= text.size()) {
    std::size_t end = text.find('\n', begin);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = trim(text.substr(begin, end - begin));
    ++line_no;
    begin = end + 1;

    if (line.empty() || line.front() == '#') {
      if (end == text.size()) break;
      continue;
    }

    // Optional integer label before the quadruple; identifies, not positions.
    std::size_t k = 0;
    while (k < line.size() && line[k] >= '0' && line[k] <= '9') ++k;
    if (k > 0) {
      if (k == line.size()) throw ParseError("label without message", line_no);
      line = trim(line.substr(k));
    }

    Message m;
    try {
      m = parse_message(line);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line_no);
    }
    t.events.push_back(table.intern(m));
    if (end == text.size()) break;
  }

  if (t.events.empty()) throw DataError("empty trace: " + t.id);
  traces.push_back(std::move(t));
  return traces.back();
}

Trace& TraceSet::add_from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open trace file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return add_from_text(buf.str(), path);
}

std::uint64_t TraceSet::total_events() const {
  std::uint64_t n = 0;
  for (const auto& t : traces) n += t.events.size();
  return n;
}

std::string render_trace(const TraceSet& set, const Trace& t) {
  std::string out;
  for (MsgId id : t.events) {
    out += to_string(set.table.message(id));
    out += '\n';
  }
  return out;
}

InterfaceKey interface_of(const MessageTable& table, MsgId m) {
  InterfaceKey key{table.src_comp(m), table.dest_comp(m)};
  if (key.b < key.a) std::swap(key.a, key.b);
  return key;
}

Slices slice(const TraceSet& set, const Trace& t) {
  Slices out;
  for (Pos pos = 0; pos < t.events.size(); ++pos) {
    MsgId m = t.events[pos];
    out[interface_of(set.table, m)].push_back(SliceEvent{pos, m});
  }
  return out;
}

}  // namespace flowmine
