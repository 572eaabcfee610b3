#pragma once

#include <cstdint>

#include "flowmine/evaluation.hpp"
#include "flowmine/global_mining.hpp"
#include "flowmine/local_mining.hpp"

namespace flowmine {

struct MineOptions {
  AblationMode ablation = AblationMode::none;
  std::uint64_t path_cap = kDefaultPathCap;
};

struct MineResult {
  LocalMiningResult local;
  CausalityGraph graph;
  RankedPathPool pool;
  FlowModel model;
  AcceptanceReport report;
};

/// The full pipeline: local mining, global mining, position-aware evaluation.
/// Ablations replace one stage as described in evaluation.hpp.
MineResult mine(const TraceSet& set, const RoleConfig& roles, const MineOptions& options = {});

}  // namespace flowmine
