#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstring>
#include <string>

#include "flowmine/flowmine.h"
#include "json.hpp"

namespace {

const char* kTrace4Text =
    "(cpu0:cache:rd:req)\n(cpu1:cache:rd:req)\n(cache:mem:rd:req)\n(cache:cpu0:rd:resp)\n"
    "(mem:cache:rd:resp)\n(cache:cpu1:rd:resp)\n(cpu0:cache:rd:req)\n(cache:mem:rd:req)\n"
    "(mem:cache:rd:resp)\n(cache:cpu0:rd:resp)\n(cpu1:cache:rd:req)\n(cache:cpu1:rd:resp)\n";

const char* kRolesText =
    "{\"initial\": [\"(cpu0:cache:rd:req)\", \"(cpu1:cache:rd:req)\"],"
    " \"terminal\": [\"(cache:cpu0:rd:resp)\", \"(cache:cpu1:rd:resp)\"]}";

struct Owned {
  char* value = nullptr;
  ~Owned() { fm_string_free(value); }
};

}  // namespace

TEST_CASE("mining through the C API reproduces the worked example") {
  fm_trace_set* set = nullptr;
  REQUIRE(fm_trace_set_new(&set) == FM_OK);
  REQUIRE(fm_trace_set_load_string(set, "t4", kTrace4Text) == FM_OK);
  CHECK(fm_trace_set_count(set) == 1);
  CHECK(fm_trace_set_total_events(set) == 12);

  fm_roles* roles = nullptr;
  REQUIRE(fm_roles_parse_string(&roles, kRolesText) == FM_OK);

  fm_result* result = nullptr;
  REQUIRE(fm_mine(set, roles, nullptr, &result) == FM_OK);
  CHECK(fm_result_acceptance_ratio(result) == doctest::Approx(1.0));
  CHECK(fm_result_model_size(result) == 4);
  CHECK(fm_result_runtime_seconds(result) >= 0.0);

  Owned model, report, patterns, graph_dot, model_dot;
  REQUIRE(fm_result_model_json(result, &model.value) == FM_OK);
  REQUIRE(fm_result_report_json(result, &report.value) == FM_OK);
  REQUIRE(fm_result_patterns_json(result, &patterns.value) == FM_OK);
  REQUIRE(fm_result_graph_dot(result, &graph_dot.value) == FM_OK);
  REQUIRE(fm_result_model_dot(result, &model_dot.value) == FM_OK);

  auto model_doc = nlohmann::json::parse(model.value);
  CHECK(model_doc["size"] == 4);
  CHECK(model_doc["flows"].size() == 4);

  auto report_doc = nlohmann::json::parse(report.value);
  CHECK(report_doc["aggregate_ratio"] == doctest::Approx(1.0));
  CHECK(report_doc["traces"].size() == 1);
  CHECK(report_doc["histogram"].size() == 2);

  auto patterns_doc = nlohmann::json::parse(patterns.value);
  CHECK(patterns_doc["valid"].size() == 3);
  CHECK(patterns_doc["invalid"].empty());

  CHECK(std::strstr(graph_dot.value, "digraph") != nullptr);
  CHECK(std::strstr(graph_dot.value, "(cpu0:cache:rd:req)") != nullptr);
  CHECK(std::strstr(model_dot.value, "cluster_0") != nullptr);

  fm_result_free(result);
  fm_roles_free(roles);
  fm_trace_set_free(set);
}

TEST_CASE("ablation options flow through") {
  fm_trace_set* set = nullptr;
  REQUIRE(fm_trace_set_new(&set) == FM_OK);
  REQUIRE(fm_trace_set_load_string(set, "t4", kTrace4Text) == FM_OK);
  fm_roles* roles = nullptr;
  REQUIRE(fm_roles_parse_string(&roles, kRolesText) == FM_OK);

  fm_mine_options options{};
  options.ablation = FM_ABLATION_NO_POSITIONAL;
  options.path_cap = 0;
  fm_result* result = nullptr;
  REQUIRE(fm_mine(set, roles, &options, &result) == FM_OK);
  CHECK(fm_result_acceptance_ratio(result) <= 0.66);

  fm_result_free(result);
  fm_roles_free(roles);
  fm_trace_set_free(set);
}

TEST_CASE("error paths set codes and messages") {
  fm_trace_set* set = nullptr;
  REQUIRE(fm_trace_set_new(&set) == FM_OK);

  SUBCASE("null arguments") {
    CHECK(fm_trace_set_load_string(nullptr, "x", "y") == FM_ERR_INVALID_ARGUMENT);
    CHECK(fm_mine(nullptr, nullptr, nullptr, nullptr) == FM_ERR_INVALID_ARGUMENT);
  }

  SUBCASE("missing file") {
    CHECK(fm_trace_set_load_file(set, "/nonexistent/trace.txt") == FM_ERR_IO);
    CHECK(std::strlen(fm_last_error()) > 0);
  }

  SUBCASE("malformed trace carries the line number") {
    CHECK(fm_trace_set_load_string(set, "bad", "(cpu0:cache:rd:req)\nnot a message\n") ==
          FM_ERR_PARSE);
    CHECK(std::strstr(fm_last_error(), "line 2") != nullptr);
  }

  SUBCASE("empty trace is a data error") {
    CHECK(fm_trace_set_load_string(set, "empty", "# nothing\n") == FM_ERR_DATA);
  }

  SUBCASE("bad roles JSON") {
    fm_roles* roles = nullptr;
    CHECK(fm_roles_parse_string(&roles, "{\"initial\": []}") == FM_ERR_CONFIG);
    CHECK(fm_roles_parse_string(&roles, "not json") == FM_ERR_CONFIG);
  }

  SUBCASE("mining with an unsatisfied initial role is a data error") {
    REQUIRE(fm_trace_set_load_string(set, "two", "(cpu0:cache:rd:req)\n(cache:cpu0:rd:resp)\n") ==
            FM_OK);
    fm_roles* roles = nullptr;
    REQUIRE(fm_roles_parse_string(&roles, kRolesText) == FM_OK);
    fm_result* result = nullptr;
    CHECK(fm_mine(set, roles, nullptr, &result) == FM_ERR_DATA);
    CHECK(std::strstr(fm_last_error(), "cpu1") != nullptr);
    fm_roles_free(roles);
  }

  SUBCASE("tiny path cap is a limit error") {
    REQUIRE(fm_trace_set_load_string(set, "t4", kTrace4Text) == FM_OK);
    fm_roles* roles = nullptr;
    REQUIRE(fm_roles_parse_string(&roles, kRolesText) == FM_OK);
    fm_mine_options options{};
    options.path_cap = 2;
    fm_result* result = nullptr;
    CHECK(fm_mine(set, roles, &options, &result) == FM_ERR_LIMIT);
    fm_roles_free(roles);
  }

  fm_trace_set_free(set);
}

TEST_CASE("generation through the C API is deterministic") {
  Owned trace_a, gt_a, roles_a, trace_b;
  REQUIRE(fm_generate("small", 20, 7, "random", &trace_a.value, &gt_a.value, &roles_a.value) ==
          FM_OK);
  REQUIRE(fm_generate("small", 20, 7, "random", &trace_b.value, nullptr, nullptr) == FM_OK);
  CHECK(std::string(trace_a.value) == trace_b.value);
  CHECK(std::strlen(gt_a.value) > 0);

  auto roles_doc = nlohmann::json::parse(roles_a.value);
  CHECK(roles_doc["initial"].size() == 2);  // hit and miss flows share roots

  CHECK(fm_generate("medium", 20, 7, "random", nullptr, nullptr, nullptr) == FM_ERR_CONFIG);
  CHECK(fm_generate("small", 0, 7, "random", nullptr, nullptr, nullptr) == FM_ERR_CONFIG);
  CHECK(fm_generate("small", 20, 7, "sometimes", nullptr, nullptr, nullptr) == FM_ERR_CONFIG);
}

TEST_CASE("a mined result stays valid after its inputs are freed") {
  fm_trace_set* set = nullptr;
  REQUIRE(fm_trace_set_new(&set) == FM_OK);
  REQUIRE(fm_trace_set_load_string(set, "t4", kTrace4Text) == FM_OK);
  fm_roles* roles = nullptr;
  REQUIRE(fm_roles_parse_string(&roles, kRolesText) == FM_OK);
  fm_result* result = nullptr;
  REQUIRE(fm_mine(set, roles, nullptr, &result) == FM_OK);

  fm_trace_set_free(set);
  fm_roles_free(roles);

  Owned model;
  CHECK(fm_result_model_json(result, &model.value) == FM_OK);
  CHECK(nlohmann::json::parse(model.value)["size"] == 4);
  fm_result_free(result);
}
