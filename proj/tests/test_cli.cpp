#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

// End-to-end checks of the installed command-line surface. The binary path
// comes from the FLOWMINE_CLI environment variable set by the build.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace {

namespace fs = std::filesystem;

std::string cli() {
  const char* path = std::getenv("FLOWMINE_CLI");
  REQUIRE(path != nullptr);
  return path;
}

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run(const std::string& args) {
  fs::path out_file = fs::temp_directory_path() / "flowmine_cli_out.txt";
  std::string cmd = cli() + " " + args + " >" + out_file.string() + " 2>&1";
  int rc = std::system(cmd.c_str());
  RunResult result;
  result.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  std::ifstream in(out_file);
  std::ostringstream buf;
  buf << in.rdbuf();
  result.output = buf.str();
  return result;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(bool(in));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

// report.json with the volatile runtime field zeroed, for byte comparison.
std::string normalized_report(const fs::path& p) {
  auto doc = nlohmann::json::parse(read_file(p));
  doc["runtime_seconds"] = 0;
  return doc.dump(2);
}

struct TempDir {
  fs::path path;
  explicit TempDir(const char* name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

const char* kTrace4 =
    "(cpu0:cache:rd:req)\n(cpu1:cache:rd:req)\n(cache:mem:rd:req)\n(cache:cpu0:rd:resp)\n"
    "(mem:cache:rd:resp)\n(cache:cpu1:rd:resp)\n(cpu0:cache:rd:req)\n(cache:mem:rd:req)\n"
    "(mem:cache:rd:resp)\n(cache:cpu0:rd:resp)\n(cpu1:cache:rd:req)\n(cache:cpu1:rd:resp)\n";

const char* kRoles =
    "{\"initial\": [\"(cpu0:cache:rd:req)\", \"(cpu1:cache:rd:req)\"],"
    " \"terminal\": [\"(cache:cpu0:rd:resp)\", \"(cache:cpu1:rd:resp)\"]}\n";

}  // namespace

TEST_CASE("generate -> mine -> report round trip") {
  TempDir dir("fm_cli_roundtrip");

  // The output directory is created on demand.
  RunResult gen = run("generate --profile small --instances 20 --seed 7 --out " +
                      (dir.path / "nested" / "out").string());
  CHECK(gen.exit_code == 0);
  CHECK(fs::exists(dir.path / "nested" / "out" / "trace.txt"));

  gen = run("generate --profile small --instances 20 --seed 7 --out " + dir.path.string());
  CHECK(gen.exit_code == 0);
  CHECK(gen.output.find("generated") != std::string::npos);
  CHECK(fs::exists(dir.path / "trace.txt"));
  CHECK(fs::exists(dir.path / "ground_truth.jsonl"));
  CHECK(fs::exists(dir.path / "roles.json"));

  RunResult mine = run("mine --traces " + (dir.path / "trace.txt").string() + " --roles " +
                       (dir.path / "roles.json").string() + " --out " + dir.path.string() +
                       " --dot --patterns");
  CHECK(mine.exit_code == 0);
  CHECK(mine.output.find("acceptance ratio") != std::string::npos);
  CHECK(fs::exists(dir.path / "model.json"));
  CHECK(fs::exists(dir.path / "report.json"));
  CHECK(fs::exists(dir.path / "causality_graph.dot"));
  CHECK(fs::exists(dir.path / "model.dot"));
  CHECK(fs::exists(dir.path / "patterns.json"));

  RunResult rep = run("report " + (dir.path / "report.json").string() + " --out " + dir.path.string());
  CHECK(rep.exit_code == 0);
  CHECK(rep.output.find("Ratio") != std::string::npos);
  CHECK(fs::exists(dir.path / "histogram.csv"));
  std::string csv = read_file(dir.path / "histogram.csv");
  CHECK(csv.rfind("path_length,instance_count\n", 0) == 0);
}

TEST_CASE("rerunning commands yields identical artifacts") {
  TempDir a("fm_cli_det_a");

  std::string gen_cmd = "generate --profile large --instances 5 --seed 42 --out " + a.path.string();
  REQUIRE(run(gen_cmd).exit_code == 0);
  std::string trace_first = read_file(a.path / "trace.txt");
  std::string gt_first = read_file(a.path / "ground_truth.jsonl");
  std::string roles_first = read_file(a.path / "roles.json");
  REQUIRE(run(gen_cmd).exit_code == 0);
  CHECK(read_file(a.path / "trace.txt") == trace_first);
  CHECK(read_file(a.path / "ground_truth.jsonl") == gt_first);
  CHECK(read_file(a.path / "roles.json") == roles_first);

  std::string mine_cmd = "mine --traces " + (a.path / "trace.txt").string() + " --roles " +
                         (a.path / "roles.json").string() + " --dot --out " + a.path.string();
  REQUIRE(run(mine_cmd).exit_code == 0);
  std::string model_first = read_file(a.path / "model.json");
  std::string dot_first = read_file(a.path / "causality_graph.dot");
  std::string report_first = normalized_report(a.path / "report.json");
  REQUIRE(run(mine_cmd).exit_code == 0);
  CHECK(read_file(a.path / "model.json") == model_first);
  CHECK(read_file(a.path / "causality_graph.dot") == dot_first);
  CHECK(normalized_report(a.path / "report.json") == report_first);
}

TEST_CASE("mining the worked example prints the expected summary") {
  TempDir dir("fm_cli_example");
  write_file(dir.path / "trace.txt", kTrace4);
  write_file(dir.path / "roles.json", kRoles);

  RunResult mine = run("mine --traces " + (dir.path / "trace.txt").string() + " --roles " +
                       (dir.path / "roles.json").string() + " --out " + dir.path.string());
  CHECK(mine.exit_code == 0);
  CHECK(mine.output.find("acceptance ratio: 100.00%") != std::string::npos);
  CHECK(mine.output.find("model size: 4") != std::string::npos);

  RunResult ablated = run("mine --traces " + (dir.path / "trace.txt").string() + " --roles " +
                          (dir.path / "roles.json").string() + " --out " + dir.path.string() +
                          " --ablate no_positional");
  CHECK(ablated.exit_code == 0);
  double ratio = -1;
  std::sscanf(ablated.output.c_str(), "acceptance ratio: %lf%%", &ratio);
  CHECK(ratio >= 0);
  CHECK(ratio <= 66.0);
}

TEST_CASE("histogram of the first example trace") {
  TempDir dir("fm_cli_trace1");
  write_file(dir.path / "trace.txt",
             "(cpu1:cache:rd:req)\n(cpu0:cache:rd:req)\n(cpu0:cache:rd:req)\n(cache:mem:rd:req)\n"
             "(cache:cpu1:rd:resp)\n(mem:cache:rd:resp)\n(cache:cpu0:rd:resp)\n(cache:mem:rd:req)\n"
             "(mem:cache:rd:resp)\n(cache:cpu0:rd:resp)\n(cpu0:cache:rd:req)\n(cache:cpu0:rd:resp)\n"
             "(cpu1:cache:rd:req)\n(cache:cpu1:rd:resp)\n");
  write_file(dir.path / "roles.json", kRoles);

  REQUIRE(run("mine --traces " + (dir.path / "trace.txt").string() + " --roles " +
              (dir.path / "roles.json").string() + " --out " + dir.path.string()).exit_code == 0);
  REQUIRE(run("report " + (dir.path / "report.json").string() + " --out " + dir.path.string())
              .exit_code == 0);
  CHECK(read_file(dir.path / "histogram.csv") == "path_length,instance_count\n2,3\n4,2\n");
}

TEST_CASE("exit codes distinguish usage from data errors") {
  TempDir dir("fm_cli_errors");
  write_file(dir.path / "roles.json", kRoles);
  write_file(dir.path / "bad.txt", "(cpu0:cache:rd:req)\ngarbage\n");

  CHECK(run("mine --traces /does/not/exist.txt --roles " + (dir.path / "roles.json").string())
            .exit_code == 2);
  CHECK(run("mine --traces " + (dir.path / "bad.txt").string() + " --roles " +
            (dir.path / "roles.json").string())
            .exit_code == 2);
  CHECK(run("report /does/not/exist.json").exit_code == 2);
  CHECK(run("generate --seed 1 --profile enormous --out " + dir.path.string()).exit_code == 1);
  CHECK(run("mine --no-such-flag").exit_code == 1);
  CHECK(run("").exit_code == 1);

  write_file(dir.path / "trace.txt", kTrace4);
  write_file(dir.path / "badroles.json", "{\"initial\": []}");
  CHECK(run("mine --traces " + (dir.path / "trace.txt").string() + " --roles " +
            (dir.path / "badroles.json").string())
            .exit_code == 1);
}
