#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "flowmine/global_mining.hpp"
#include "flowmine/local_mining.hpp"
#include "flowmine/trace.hpp"

namespace flowmine {

enum class AblationMode { none, no_slicing, no_positional };

/// Messages role sets resolved against a table.
struct RoleIds {
  std::set<MsgId> initial;
  std::set<MsgId> terminal;
};

/// Maps role messages to interned ids. Every initial message must occur in
/// the traces (DataError naming the first missing one); terminal messages
/// that never occur are ignored.
RoleIds resolve_roles(const TraceSet& set, const RoleConfig& roles);

/// Per trace: initial event position -> matched terminal position, taken from
/// the valid patterns whose destination is a terminal message (the smallest
/// matched destination when several patterns start at the same message).
/// `source` is set when the bounds come from local mining, so evaluation can
/// also hold interior claims to the recorded instance pairs.
struct EvalBounds {
  std::vector<std::map<Pos, Pos>> per_trace;
  const LocalMiningResult* source = nullptr;
};

EvalBounds bounds_from_local(const TraceSet& set, const LocalMiningResult& local,
                             const RoleIds& roles);
/// Same shape, but from FIFO matching of every terminal-destination graph
/// edge on the unsliced traces (used when local validity is skipped).
EvalBounds bounds_from_global(const TraceSet& set, const CausalityGraph& g,
                              const RoleIds& roles);

/// The bounded sub-trace for the initial event at `start`: events in
/// [start, end] excluding consumed positions. `none` when the initial has no
/// matched terminal or the matched terminal was already consumed.
/// `pending` lists the other unconsumed initial events inside the window with
/// their own matched bounds; claiming prefers instance pairs no pending
/// window could use.
struct SubTrace {
  Pos start = 0;
  Pos end = 0;
  std::vector<SliceEvent> events;               // unconsumed, original positions
  std::vector<std::pair<Pos, Pos>> pending;     // (initial position, its bound)
};

std::optional<SubTrace> extract_subtrace(const Trace& t, Pos start, const std::map<Pos, Pos>& bounds,
                                         const std::vector<bool>& consumed);

/// Same construction as the global graph, restricted to the sub-trace's
/// message types.
CausalityGraph build_sub_causality_graph(const MessageTable& table, const SubTrace& s,
                                         const RoleIds& roles, const EdgeFilter& filter = {});

struct Selection {
  std::vector<MsgId> path;
  std::vector<Pos> positions;  // one claimed position per path message
  double energy = 0;
  int orphans = 0;
};

/// Per valid pattern: matched source position -> destination position, for one
/// trace. Claiming a valid-pattern edge during evaluation must respect these
/// pairs, keeping evaluation consistent with local mining's instance matching.
using PairPartners = std::unordered_map<PatternKey, std::unordered_map<Pos, Pos>, PatternKeyHash>;

PairPartners pair_partners(const LocalMiningResult& local, std::size_t trace_index);

/// Picks among the sub-graph's root-to-terminal paths the flow instance that
/// explains the sub-trace's first event: candidates must match a finite-energy
/// globally ranked path, start at the sub-trace's first position, end exactly
/// at its matched terminal, and embed in order; ranked by fewest orphans, then
/// lowest energy, then longest, then content order. An orphan is a window
/// occurrence the claim would strand: left over beyond what the pending
/// initials' remaining flow instances could still explain.
std::optional<Selection> select_candidate(const MessageTable& table,
                                          const std::vector<std::vector<MsgId>>& sub_paths,
                                          const RankedPathPool& pool, const CausalityGraph& sub_graph,
                                          const SubTrace& sub, const RoleIds& roles,
                                          const PairPartners* partners = nullptr,
                                          const std::map<MsgId, std::set<MsgId>>* closures = nullptr);

struct Flow {
  std::vector<MsgId> msgs;
  double energy = 0;
  std::uint64_t instances = 0;
};

/// Mined flows, deduplicated, in first-selection order.
struct FlowModel {
  std::vector<Flow> flows;

  void add(const std::vector<MsgId>& msgs, double energy);
  const Flow* find(const std::vector<MsgId>& msgs) const;
  std::size_t size() const { return flows.size(); }

private:
  std::unordered_map<std::vector<MsgId>, std::size_t, PathSeqHash> index_;
};

struct TraceEvaluation {
  std::string trace_id;
  std::uint64_t events = 0;
  std::vector<Pos> accepted;
  std::vector<Pos> unaccepted;
  double ratio = 0;
  std::vector<Selection> selections;  // in selection order
};

struct AcceptanceReport {
  std::vector<TraceEvaluation> traces;
  double aggregate_ratio = 0;   // sum of accepted over sum of lengths
  double mean_trace_ratio = 0;  // mean of per-trace ratios
  std::map<std::size_t, std::uint64_t> histogram;  // path length -> instances
  double runtime_seconds = 0;
  std::uint64_t eval_event_visits = 0;  // events touched while windowing
};

struct EvalResult {
  AcceptanceReport report;
  FlowModel model;
};

/// Position-aware single-pass evaluation: one left-to-right pass per trace,
/// claiming flow instances at unconsumed initial events and marking everything
/// else unaccepted. Deterministic. Sub-graphs honor the same edge filter the
/// global graph was built with.
EvalResult evaluate(const TraceSet& set, const RankedPathPool& pool, const EvalBounds& bounds,
                    const RoleIds& roles, std::uint64_t path_cap = kDefaultPathCap,
                    const EdgeFilter& filter = {});

/// Greedy sequential matcher without positional indexing: each initial event
/// opens an instance committed to the cheapest ranked path starting with it;
/// later events extend the oldest expecting instance; only completed
/// instances are accepted.
EvalResult evaluate_sequential(const TraceSet& set, const RankedPathPool& pool,
                               const RoleIds& roles);

}  // namespace flowmine
