#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "flowmine/causality_graph.hpp"

namespace flowmine {

inline constexpr std::uint64_t kDefaultPathCap = 1'000'000;

struct CandidatePath {
  std::vector<MsgId> msgs;
  double energy = 0;  // +inf when the path has no valid-pattern support
};

/// Exhaustive enumeration of simple root-to-terminal paths (>= 1 edge),
/// deterministic order. Throws LimitError when the count exceeds `cap`.
std::vector<std::vector<MsgId>> enumerate_paths(const CausalityGraph& g, std::uint64_t cap);

/// Path energy from its per-edge terms:
///   mean(-log2 conf) - log2(vbp_total / msg_count) + mean(dist)
/// vbp_total == 0 yields +inf. Pure function, shared by tests.
double path_energy_terms(const std::vector<double>& edge_conf, std::uint64_t vbp_total,
                         std::size_t msg_count, const std::vector<double>& edge_dist);

double path_energy(const CausalityGraph& g, const std::vector<MsgId>& path);

struct PathSeqHash {
  std::size_t operator()(const std::vector<MsgId>& seq) const;
};

/// Candidate paths sorted by energy ascending; ties broken by longer path
/// first, then content order of the message sequences.
struct RankedPathPool {
  std::vector<CandidatePath> paths;

  const CandidatePath* find(const std::vector<MsgId>& seq) const;
  /// First (cheapest) finite-energy path starting with the given message.
  const CandidatePath* cheapest_from(MsgId start) const;

  void build_index();

private:
  std::unordered_map<std::vector<MsgId>, std::size_t, PathSeqHash> index_;
};

RankedPathPool rank_paths(const MessageTable& table, const CausalityGraph& g,
                          const std::vector<std::vector<MsgId>>& paths);

struct GlobalMiningResult {
  CausalityGraph graph;  // pruned and annotated
  RankedPathPool pool;
};

/// Build -> prune -> annotate -> enumerate -> energy -> rank.
GlobalMiningResult global_mine(const TraceSet& set, const LocalMiningResult& local,
                               const RoleConfig& roles, std::uint64_t path_cap = kDefaultPathCap,
                               bool global_only = false);

}  // namespace flowmine
