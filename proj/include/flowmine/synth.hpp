#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "flowmine/message.hpp"
#include "flowmine/trace.hpp"

namespace flowmine {

/// A ground-truth flow: a DAG over messages whose root-to-sink paths are the
/// alternative scenarios of one transaction type.
struct FlowSpec {
  std::string id;
  std::vector<Message> nodes;
  std::vector<std::pair<int, int>> edges;  // indices into nodes
  std::vector<int> roots;
  std::vector<int> sinks;

  /// All root-to-sink paths, as node index sequences, in deterministic order.
  std::vector<std::vector<int>> paths() const;

  /// Throws ConfigError if the graph is cyclic, has nodes off every
  /// root-to-sink path, or violates structural causality along an edge.
  void validate() const;
};

enum class Profile { small, large };

/// The built-in benchmark flows: `large` is ten flows over
/// {cpu0, cpu1, cache, mem, periph, bus} (CPU read/write hit+miss, DMA-style
/// peripheral transactions, interrupts, cache writeback); `small` is the four
/// CPU-initiated flows. See README for the full message alphabet.
std::vector<FlowSpec> builtin_flows(Profile profile);

/// Initial = all flow roots, terminal = all flow sinks.
RoleConfig roles_for(const std::vector<FlowSpec>& flows);

enum class InterleaveMode {
  /// Each step emits the next message of a uniformly random non-exhausted
  /// instance: maximal interleaving, every instance in flight at once.
  random_interleave,
  /// Cycles over flows, each flow running its instances one at a time:
  /// bounded concurrency (at most one in-flight instance per flow).
  round_robin,
};

struct GroundTruthEntry {
  Pos pos = 0;
  std::string flow_id;
  std::uint32_t instance = 0;  // instance number within the flow
  std::uint32_t step = 0;      // index within the instance's chosen path
};

struct Generated {
  TraceSet traces;  // a single trace named "synthetic"
  std::vector<GroundTruthEntry> ground_truth;

  /// Distinct root-to-sink paths actually instantiated, as message sequences.
  std::vector<std::vector<Message>> instantiated_paths() const;
};

/// Generates one interleaved trace: every flow contributes exactly
/// `instances_per_flow` instances, each following one uniformly random
/// root-to-sink path. Deterministic for a fixed seed across platforms.
/// Throws ConfigError for instances_per_flow <= 0 or empty flows.
Generated generate(const std::vector<FlowSpec>& flows, int instances_per_flow,
                   std::uint64_t seed, InterleaveMode mode);

/// One JSON object per line: {"pos":..,"flow":..,"instance":..,"step":..}
std::string ground_truth_jsonl(const Generated& gen);

}  // namespace flowmine
