/* C API for the flowmine message-flow mining library.
 *
 * All functions return fm_status; fm_last_error() describes the most recent
 * failure on the calling thread. Objects are opaque handles owned by the
 * caller and released with the matching _free function. Strings returned
 * through char** outputs are heap-allocated; release them with
 * fm_string_free(). Handles are immutable once filled and safe to share
 * across threads.
 */

#ifndef FLOWMINE_H
#define FLOWMINE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define FM_API __declspec(dllexport)
#else
#define FM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fm_status {
  FM_OK = 0,
  FM_ERR_INVALID_ARGUMENT = 1,
  FM_ERR_PARSE = 2,
  FM_ERR_CONFIG = 3,
  FM_ERR_DATA = 4,
  FM_ERR_LIMIT = 5,
  FM_ERR_IO = 6,
  FM_ERR_INTERNAL = 7
} fm_status;

typedef enum fm_ablation {
  FM_ABLATION_NONE = 0,
  FM_ABLATION_NO_SLICING = 1,
  FM_ABLATION_NO_POSITIONAL = 2
} fm_ablation;

typedef struct fm_trace_set fm_trace_set;
typedef struct fm_roles fm_roles;
typedef struct fm_result fm_result;

typedef struct fm_mine_options {
  fm_ablation ablation;
  uint64_t path_cap; /* 0 means the default (10^6 candidate paths) */
} fm_mine_options;

FM_API const char* fm_last_error(void);
FM_API void fm_string_free(char* s);

/* ---- traces ---- */
FM_API fm_status fm_trace_set_new(fm_trace_set** out);
FM_API fm_status fm_trace_set_load_file(fm_trace_set* set, const char* path);
FM_API fm_status fm_trace_set_load_string(fm_trace_set* set, const char* id, const char* text);
FM_API size_t fm_trace_set_count(const fm_trace_set* set);
FM_API uint64_t fm_trace_set_total_events(const fm_trace_set* set);
FM_API void fm_trace_set_free(fm_trace_set* set);

/* ---- roles ---- */
FM_API fm_status fm_roles_parse_file(fm_roles** out, const char* path);
FM_API fm_status fm_roles_parse_string(fm_roles** out, const char* json);
FM_API void fm_roles_free(fm_roles* roles);

/* ---- synthetic benchmark generation ----
 * profile: "small" | "large"; mode: "random" | "round_robin".
 * Any of the output pointers may be NULL when not wanted.
 */
FM_API fm_status fm_generate(const char* profile, long long instances_per_flow, uint64_t seed,
                             const char* mode, char** trace_text, char** ground_truth_jsonl,
                             char** roles_json);

/* ---- mining ---- */
FM_API fm_status fm_mine(const fm_trace_set* set, const fm_roles* roles,
                         const fm_mine_options* options, fm_result** out);

FM_API double fm_result_acceptance_ratio(const fm_result* r);
FM_API double fm_result_mean_trace_ratio(const fm_result* r);
FM_API size_t fm_result_model_size(const fm_result* r);
FM_API double fm_result_runtime_seconds(const fm_result* r);
FM_API fm_status fm_result_model_json(const fm_result* r, char** out);
FM_API fm_status fm_result_report_json(const fm_result* r, char** out);
FM_API fm_status fm_result_patterns_json(const fm_result* r, char** out);
FM_API fm_status fm_result_graph_dot(const fm_result* r, char** out);
FM_API fm_status fm_result_model_dot(const fm_result* r, char** out);
FM_API void fm_result_free(fm_result* r);

#ifdef __cplusplus
}
#endif

#endif /* FLOWMINE_H */
