#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <vector>

#include "flowmine/local_mining.hpp"
#include "flowmine/trace.hpp"

namespace flowmine {

/// Optional admission predicate for structural-causality edges; a null filter
/// admits every edge.
using EdgeFilter = std::function<bool(MsgId, MsgId)>;

/// The mining pipeline's filter: an edge whose endpoints share one interface
/// must be a locally validated pattern (every other same-interface relation is
/// an invalid direction by local mining); cross-interface edges pass.
EdgeFilter valid_pattern_edge_filter(const MessageTable& table, const LocalMiningResult& local);

struct EdgeInfo {
  double fc = 0;
  double bc = 0;
  bool valid_bp = false;        // confidences reused from local mining
  double mean_dist = 0;         // mean positional gap of matched pairs
  std::uint64_t vbp_count = 0;  // matched valid-pattern instances on this edge
  std::uint64_t support = 0;    // matched pairs in scoring scope

  double conf() const { return 0.5 * (fc + bc); }
};

/// Multi-root DAG over unique messages; edges are structural-causality
/// relations annotated with confidences.
struct CausalityGraph {
  std::vector<MsgId> nodes;      // content order
  std::set<MsgId> roots;
  std::set<MsgId> terminals;
  std::map<std::pair<MsgId, MsgId>, EdgeInfo> edges;
  std::map<MsgId, std::vector<MsgId>> out;  // successors in content order

  bool has_edge(MsgId a, MsgId b) const { return edges.count({a, b}) != 0; }
  bool is_dag() const;

  void add_edge(MsgId a, MsgId b);
  void remove_edge(MsgId a, MsgId b);
  /// Drops nodes unreachable from every root, and their edges.
  void drop_unreachable();
};

/// BFS construction from the given roots over structural causality among
/// `unique` message types. Expansion stops at terminal messages; edges that
/// would introduce a cycle are omitted; expansion order is content order.
CausalityGraph build_graph(const MessageTable& table, const std::vector<MsgId>& unique,
                           const std::set<MsgId>& roots, const std::set<MsgId>& terminals,
                           const EdgeFilter& filter = {});

/// Builds the global causality graph over all unique messages of the trace
/// set. Throws DataError when an initial message never occurs.
CausalityGraph build_causality_graph(const TraceSet& set, const RoleConfig& roles,
                                     const EdgeFilter& filter = {});

/// Removes edges classified invalid by local mining, then unreachable nodes.
CausalityGraph prune_invalid_edges(CausalityGraph g, const std::vector<PatternKey>& invalid);

/// Valid-pattern edges reuse slice-scope confidences and instance counts;
/// all other edges are scored with FIFO matching on the unsliced traces
/// (averaged across traces). Edges with zero support anywhere are dropped.
/// With `global_only` every edge is scored globally and its global match
/// count stands in for valid-pattern support.
void annotate_confidences(CausalityGraph& g, const TraceSet& set,
                          const LocalMiningResult& local, bool global_only = false);

std::string to_dot(const CausalityGraph& g, const MessageTable& table);

}  // namespace flowmine
