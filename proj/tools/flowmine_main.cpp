// flowmine CLI: generate synthetic benchmark traces, mine message flows from
// trace files, and render reports. Built entirely on the C API (flowmine.h).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "flowmine/flowmine.h"
#include "json.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;  // usage or configuration errors
constexpr int kExitData = 2;   // trace/report data errors

int exit_code_for(fm_status status) {
  switch (status) {
    case FM_OK:
      return kExitOk;
    case FM_ERR_INVALID_ARGUMENT:
    case FM_ERR_CONFIG:
      return kExitUsage;
    default:
      return kExitData;
  }
}

int report_failure(fm_status status, const std::string& context) {
  std::cerr << "error: " << context << ": " << fm_last_error() << "\n";
  return exit_code_for(status);
}

bool write_file(const std::string& path, const char* text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << text;
  return bool(out);
}

bool ensure_directory(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) std::cerr << "error: cannot create output directory " << dir << ": " << ec.message() << "\n";
  return !ec;
}

struct OwnedString {
  char* value = nullptr;
  ~OwnedString() { fm_string_free(value); }
};

int cmd_generate(const std::string& profile, long long instances, std::uint64_t seed,
                 const std::string& mode, const std::string& out_dir) {
  if (!ensure_directory(out_dir)) return kExitData;
  OwnedString trace, ground_truth, roles;
  fm_status rc = fm_generate(profile.c_str(), instances, seed, mode.c_str(), &trace.value,
                             &ground_truth.value, &roles.value);
  if (rc != FM_OK) return report_failure(rc, "generate");

  const std::string trace_path = out_dir + "/trace.txt";
  const std::string gt_path = out_dir + "/ground_truth.jsonl";
  const std::string roles_path = out_dir + "/roles.json";
  if (!write_file(trace_path, trace.value) || !write_file(gt_path, ground_truth.value) ||
      !write_file(roles_path, roles.value)) {
    std::cerr << "error: cannot write outputs under " << out_dir << "\n";
    return kExitData;
  }

  std::size_t messages = 0;
  for (const char* p = trace.value; *p; ++p)
    if (*p == '\n') ++messages;
  std::cout << "generated " << messages << " messages (" << profile << ", " << instances
            << " instances/flow, seed " << seed << ")\n"
            << "  " << trace_path << "\n  " << gt_path << "\n  " << roles_path << "\n";
  return kExitOk;
}

int cmd_mine(const std::vector<std::string>& trace_paths, const std::string& roles_path,
             const std::string& out_dir, const std::string& ablate, std::uint64_t path_cap,
             bool dot, bool dump_patterns) {
  if (!ensure_directory(out_dir)) return kExitData;
  fm_trace_set* set = nullptr;
  fm_status rc = fm_trace_set_new(&set);
  if (rc != FM_OK) return report_failure(rc, "mine");
  struct SetGuard {
    fm_trace_set* p;
    ~SetGuard() { fm_trace_set_free(p); }
  } set_guard{set};

  for (const auto& path : trace_paths) {
    rc = fm_trace_set_load_file(set, path.c_str());
    if (rc != FM_OK) return report_failure(rc, "loading " + path);
  }

  fm_roles* roles = nullptr;
  rc = fm_roles_parse_file(&roles, roles_path.c_str());
  if (rc != FM_OK) return report_failure(rc, "loading roles " + roles_path);
  struct RolesGuard {
    fm_roles* p;
    ~RolesGuard() { fm_roles_free(p); }
  } roles_guard{roles};

  fm_mine_options options{};
  options.ablation = FM_ABLATION_NONE;
  options.path_cap = path_cap;
  if (ablate == "no_slicing")
    options.ablation = FM_ABLATION_NO_SLICING;
  else if (ablate == "no_positional")
    options.ablation = FM_ABLATION_NO_POSITIONAL;
  else if (!ablate.empty()) {
    std::cerr << "error: unknown ablation '" << ablate << "' (expected no_slicing|no_positional)\n";
    return kExitUsage;
  }

  fm_result* result = nullptr;
  rc = fm_mine(set, roles, &options, &result);
  if (rc != FM_OK) return report_failure(rc, "mine");
  struct ResultGuard {
    fm_result* p;
    ~ResultGuard() { fm_result_free(p); }
  } result_guard{result};

  auto emit = [&](const char* name, fm_status (*fn)(const fm_result*, char**)) -> int {
    OwnedString text;
    fm_status st = fn(result, &text.value);
    if (st != FM_OK) return report_failure(st, name);
    if (!write_file(out_dir + "/" + name, text.value)) {
      std::cerr << "error: cannot write " << out_dir << "/" << name << "\n";
      return kExitData;
    }
    return kExitOk;
  };

  if (int code = emit("model.json", fm_result_model_json)) return code;
  if (int code = emit("report.json", fm_result_report_json)) return code;
  if (dot) {
    if (int code = emit("causality_graph.dot", fm_result_graph_dot)) return code;
    if (int code = emit("model.dot", fm_result_model_dot)) return code;
  }
  if (dump_patterns) {
    if (int code = emit("patterns.json", fm_result_patterns_json)) return code;
  }

  std::printf("acceptance ratio: %.2f%%\n", 100.0 * fm_result_acceptance_ratio(result));
  std::printf("model size: %zu flows\n", fm_result_model_size(result));
  std::printf("runtime: %.3fs\n", fm_result_runtime_seconds(result));
  return kExitOk;
}

int cmd_report(const std::string& report_path, const std::string& out_dir) {
  if (!ensure_directory(out_dir)) return kExitData;
  std::ifstream in(report_path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot open report " << report_path << "\n";
    return kExitData;
  }
  nlohmann::json doc;
  try {
    in >> doc;
    if (!doc.is_object() || !doc.contains("histogram") || !doc.contains("aggregate_ratio"))
      throw std::runtime_error("missing report fields");
  } catch (const std::exception& e) {
    std::cerr << "error: malformed report " << report_path << ": " << e.what() << "\n";
    return kExitData;
  }

  std::map<std::uint64_t, std::uint64_t> histogram;
  for (const auto& row : doc["histogram"])
    histogram[row.at("path_length").get<std::uint64_t>()] = row.at("instances").get<std::uint64_t>();

  std::string csv = "path_length,instance_count\n";
  for (const auto& [len, count] : histogram)
    csv += std::to_string(len) + "," + std::to_string(count) + "\n";
  const std::string csv_path = out_dir + "/histogram.csv";
  if (!write_file(csv_path, csv.c_str())) {
    std::cerr << "error: cannot write " << csv_path << "\n";
    return kExitData;
  }

  std::printf("%-10s %-8s %s\n", "RT(s)", "Size", "Ratio");
  std::printf("%-10.3f %-8llu %.2f%%\n", doc.value("runtime_seconds", 0.0),
              static_cast<unsigned long long>(doc.value("model_size", 0ull)),
              100.0 * doc["aggregate_ratio"].get<double>());
  std::printf("\n%-12s %s\n", "path_length", "instances");
  for (const auto& [len, count] : histogram)
    std::printf("%-12llu %llu\n", static_cast<unsigned long long>(len),
                static_cast<unsigned long long>(count));
  std::printf("\nwrote %s\n", csv_path.c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"flowmine: mine system-level message flows from communication traces"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "emit a synthetic benchmark trace with ground truth");
  std::string profile = "small";
  long long instances = 20;
  std::uint64_t seed = 0;
  std::string mode = "random";
  std::string gen_out = ".";
  gen->add_option("--profile", profile, "flow profile: small|large")->capture_default_str();
  gen->add_option("--instances", instances, "instances per flow")->capture_default_str();
  gen->add_option("--seed", seed, "RNG seed")->required();
  gen->add_option("--mode", mode, "interleaving: random|round_robin")->capture_default_str();
  gen->add_option("--out", gen_out, "output directory")->capture_default_str();

  // mine
  auto* mine = app.add_subcommand("mine", "mine flows from trace files and evaluate them");
  std::vector<std::string> traces;
  std::string roles_path;
  std::string mine_out = ".";
  std::string ablate;
  std::uint64_t path_cap = 1000000;
  bool dot = false;
  bool patterns = false;
  mine->add_option("--traces", traces, "trace file(s)")->required()->expected(-1);
  mine->add_option("--roles", roles_path, "roles JSON (initial/terminal messages)")->required();
  mine->add_option("--out", mine_out, "output directory")->capture_default_str();
  mine->add_option("--ablate", ablate, "ablation: no_slicing|no_positional");
  mine->add_option("--path-cap", path_cap, "candidate path enumeration cap")->capture_default_str();
  mine->add_flag("--dot", dot, "also write causality_graph.dot and model.dot");
  mine->add_flag("--patterns", patterns, "also write patterns.json (local mining dump)");

  // report
  auto* rep = app.add_subcommand("report", "render histogram CSV and a text summary from report.json");
  std::string report_path;
  std::string rep_out = ".";
  rep->add_option("report", report_path, "path to report.json")->required();
  rep->add_option("--out", rep_out, "output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (gen->parsed()) return cmd_generate(profile, instances, seed, mode, gen_out);
  if (mine->parsed()) return cmd_mine(traces, roles_path, mine_out, ablate, path_cap, dot, patterns);
  return cmd_report(report_path, rep_out);
}
