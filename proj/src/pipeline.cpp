#include "flowmine/pipeline.hpp"

#include <chrono>

#include "flowmine/errors.hpp"

namespace flowmine {

MineResult mine(const TraceSet& set, const RoleConfig& roles, const MineOptions& options) {
  auto started = std::chrono::steady_clock::now();

  if (set.traces.empty()) throw DataError("no traces");
  RoleIds role_ids = resolve_roles(set, roles);

  MineResult result;
  const bool global_only = options.ablation == AblationMode::no_slicing;
  if (!global_only) result.local = local_mine(set);

  GlobalMiningResult global =
      global_mine(set, result.local, roles, options.path_cap, global_only);
  result.graph = std::move(global.graph);
  result.pool = std::move(global.pool);

  EvalResult eval;
  switch (options.ablation) {
    case AblationMode::no_positional:
      eval = evaluate_sequential(set, result.pool, role_ids);
      break;
    case AblationMode::no_slicing: {
      EvalBounds bounds = bounds_from_global(set, result.graph, role_ids);
      eval = evaluate(set, result.pool, bounds, role_ids, options.path_cap);
      break;
    }
    case AblationMode::none: {
      EvalBounds bounds = bounds_from_local(set, result.local, role_ids);
      eval = evaluate(set, result.pool, bounds, role_ids, options.path_cap,
                      valid_pattern_edge_filter(set.table, result.local));
      break;
    }
  }
  result.model = std::move(eval.model);
  result.report = std::move(eval.report);

  result.report.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

}  // namespace flowmine
