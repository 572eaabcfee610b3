#include "flowmine/flowmine.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <new>
#include <sstream>
#include <string>

#include "flowmine/errors.hpp"
#include "flowmine/pipeline.hpp"
#include "flowmine/serialize.hpp"
#include "flowmine/synth.hpp"

using namespace flowmine;

struct fm_trace_set {
  TraceSet set;
};

struct fm_roles {
  RoleConfig roles;
};

struct fm_result {
  MineResult result;
  // Snapshot of the interning table so the result outlives its trace set.
  MessageTable table;
};

namespace {

thread_local std::string g_last_error;

fm_status fail(fm_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename Fn>
fm_status guarded(Fn&& fn) {
  try {
    fn();
    return FM_OK;
  } catch (const ParseError& e) {
    return fail(FM_ERR_PARSE, e.what());
  } catch (const ConfigError& e) {
    return fail(FM_ERR_CONFIG, e.what());
  } catch (const DataError& e) {
    return fail(FM_ERR_DATA, e.what());
  } catch (const LimitError& e) {
    return fail(FM_ERR_LIMIT, e.what());
  } catch (const IoError& e) {
    return fail(FM_ERR_IO, e.what());
  } catch (const std::exception& e) {
    return fail(FM_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(FM_ERR_INTERNAL, "unknown error");
  }
}

fm_status out_string(const std::string& value, char** out) {
  if (!out) return fail(FM_ERR_INVALID_ARGUMENT, "null output pointer");
  return guarded([&] { *out = dup_string(value); });
}

}  // namespace

extern "C" {

const char* fm_last_error(void) { return g_last_error.c_str(); }

void fm_string_free(char* s) { std::free(s); }

fm_status fm_trace_set_new(fm_trace_set** out) {
  if (!out) return fail(FM_ERR_INVALID_ARGUMENT, "null output pointer");
  *out = new (std::nothrow) fm_trace_set();
  return *out ? FM_OK : fail(FM_ERR_INTERNAL, "out of memory");
}

fm_status fm_trace_set_load_file(fm_trace_set* set, const char* path) {
  if (!set || !path) return fail(FM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { set->set.add_from_file(path); });
}

fm_status fm_trace_set_load_string(fm_trace_set* set, const char* id, const char* text) {
  if (!set || !id || !text) return fail(FM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { set->set.add_from_text(text, id); });
}

size_t fm_trace_set_count(const fm_trace_set* set) { return set ? set->set.traces.size() : 0; }

uint64_t fm_trace_set_total_events(const fm_trace_set* set) {
  return set ? set->set.total_events() : 0;
}

void fm_trace_set_free(fm_trace_set* set) { delete set; }

fm_status fm_roles_parse_file(fm_roles** out, const char* path) {
  if (!out || !path) return fail(FM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(std::string("cannot open roles file: ") + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    *out = new fm_roles{parse_roles_json(buf.str())};
  });
}

fm_status fm_roles_parse_string(fm_roles** out, const char* json) {
  if (!out || !json) return fail(FM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *out = new fm_roles{parse_roles_json(json)}; });
}

void fm_roles_free(fm_roles* roles) { delete roles; }

fm_status fm_generate(const char* profile, long long instances_per_flow, uint64_t seed,
                      const char* mode, char** trace_text, char** ground_truth_jsonl_out,
                      char** roles_json_out) {
  if (!profile || !mode) return fail(FM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    Profile p;
    if (std::strcmp(profile, "small") == 0)
      p = Profile::small;
    else if (std::strcmp(profile, "large") == 0)
      p = Profile::large;
    else
      throw ConfigError(std::string("unknown profile '") + profile + "' (expected small|large)");

    InterleaveMode m;
    if (std::strcmp(mode, "random") == 0)
      m = InterleaveMode::random_interleave;
    else if (std::strcmp(mode, "round_robin") == 0)
      m = InterleaveMode::round_robin;
    else
      throw ConfigError(std::string("unknown mode '") + mode + "' (expected random|round_robin)");

    if (instances_per_flow <= 0 || instances_per_flow > (1ll << 30))
      throw ConfigError("instances per flow must be in [1, 2^30]");

    auto flows = builtin_flows(p);
    Generated gen = generate(flows, static_cast<int>(instances_per_flow), seed, m);

    if (trace_text) *trace_text = dup_string(render_trace(gen.traces, gen.traces.traces.at(0)));
    if (ground_truth_jsonl_out) *ground_truth_jsonl_out = dup_string(ground_truth_jsonl(gen));
    if (roles_json_out) *roles_json_out = dup_string(roles_json(roles_for(flows)));
  });
}

fm_status fm_mine(const fm_trace_set* set, const fm_roles* roles, const fm_mine_options* options,
                  fm_result** out) {
  if (!set || !roles || !out) return fail(FM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    MineOptions opts;
    if (options) {
      switch (options->ablation) {
        case FM_ABLATION_NONE:
          opts.ablation = AblationMode::none;
          break;
        case FM_ABLATION_NO_SLICING:
          opts.ablation = AblationMode::no_slicing;
          break;
        case FM_ABLATION_NO_POSITIONAL:
          opts.ablation = AblationMode::no_positional;
          break;
        default:
          throw ConfigError("unknown ablation mode");
      }
      if (options->path_cap) opts.path_cap = options->path_cap;
    }
    auto result = new fm_result();
    try {
      result->result = mine(set->set, roles->roles, opts);
      result->table = set->set.table;
    } catch (...) {
      delete result;
      throw;
    }
    *out = result;
  });
}

double fm_result_acceptance_ratio(const fm_result* r) {
  return r ? r->result.report.aggregate_ratio : 0.0;
}

double fm_result_mean_trace_ratio(const fm_result* r) {
  return r ? r->result.report.mean_trace_ratio : 0.0;
}

size_t fm_result_model_size(const fm_result* r) { return r ? r->result.model.size() : 0; }

double fm_result_runtime_seconds(const fm_result* r) {
  return r ? r->result.report.runtime_seconds : 0.0;
}

fm_status fm_result_model_json(const fm_result* r, char** out) {
  if (!r) return fail(FM_ERR_INVALID_ARGUMENT, "null result");
  return out_string(model_json(r->table, r->result), out);
}

fm_status fm_result_report_json(const fm_result* r, char** out) {
  if (!r) return fail(FM_ERR_INVALID_ARGUMENT, "null result");
  return out_string(report_json(r->result), out);
}

fm_status fm_result_patterns_json(const fm_result* r, char** out) {
  if (!r) return fail(FM_ERR_INVALID_ARGUMENT, "null result");
  return out_string(patterns_json(r->table, r->result.local), out);
}

fm_status fm_result_graph_dot(const fm_result* r, char** out) {
  if (!r) return fail(FM_ERR_INVALID_ARGUMENT, "null result");
  return out_string(to_dot(r->result.graph, r->table), out);
}

fm_status fm_result_model_dot(const fm_result* r, char** out) {
  if (!r) return fail(FM_ERR_INVALID_ARGUMENT, "null result");
  return out_string(model_dot(r->table, r->result.model), out);
}

void fm_result_free(fm_result* r) { delete r; }

}  // extern "C"
