#include "flowmine/evaluation.hpp"

#include <algorithm>
#include <cmath>

#include "flowmine/errors.hpp"

namespace flowmine {

RoleIds resolve_roles(const TraceSet& set, const RoleConfig& roles) {
  if (roles.initial.empty() || roles.terminal.empty())
    throw ConfigError("initial and terminal message sets must be non-empty");

  std::set<MsgId> seen;
  for (const auto& t : set.traces)
    for (MsgId m : t.events) seen.insert(m);

  RoleIds out;
  for (const auto& m : roles.initial) {
    auto id = set.table.find(m);
    if (!id || !seen.count(*id))
      throw DataError("initial message " + to_string(m) + " does not occur in the traces");
    out.initial.insert(*id);
  }
  for (const auto& m : roles.terminal) {
    auto id = set.table.find(m);
    if (id && seen.count(*id)) out.terminal.insert(*id);
  }
  return out;
}

EvalBounds bounds_from_local(const TraceSet& set, const LocalMiningResult& local,
                             const RoleIds& roles) {
  EvalBounds bounds;
  bounds.source = &local;
  bounds.per_trace.resize(set.traces.size());
  for (std::size_t ti = 0; ti < set.traces.size(); ++ti) {
    for (const auto& [key, pairs] : local.matches[ti]) {
      if (!roles.initial.count(key.src) || !roles.terminal.count(key.dst)) continue;
      auto& map = bounds.per_trace[ti];
      for (const auto& p : pairs) {
        auto [it, fresh] = map.try_emplace(p.src_pos, p.dst_pos);
        if (!fresh && p.dst_pos < it->second) it->second = p.dst_pos;
      }
    }
  }
  return bounds;
}

EvalBounds bounds_from_global(const TraceSet& set, const CausalityGraph& g, const RoleIds& roles) {
  EvalBounds bounds;
  bounds.per_trace.resize(set.traces.size());
  for (std::size_t ti = 0; ti < set.traces.size(); ++ti) {
    std::map<MsgId, std::vector<Pos>> positions;
    const auto& events = set.traces[ti].events;
    for (Pos p = 0; p < events.size(); ++p) positions[events[p]].push_back(p);

    for (const auto& [key, info] : g.edges) {
      auto [a, b] = key;
      if (!roles.initial.count(a) || !roles.terminal.count(b)) continue;
      auto sa = positions.find(a);
      auto sb = positions.find(b);
      if (sa == positions.end() || sb == positions.end()) continue;
      FifoScore sc = fifo_match(sa->second, sb->second);
      auto& map = bounds.per_trace[ti];
      for (const auto& p : sc.pairs) {
        auto [it, fresh] = map.try_emplace(p.src_pos, p.dst_pos);
        if (!fresh && p.dst_pos < it->second) it->second = p.dst_pos;
      }
    }
  }
  return bounds;
}

std::optional<SubTrace> extract_subtrace(const Trace& t, Pos start, const std::map<Pos, Pos>& bounds,
                                         const std::vector<bool>& consumed) {
  auto it = bounds.find(start);
  if (it == bounds.end()) return std::nullopt;
  Pos end = it->second;
  if (consumed[end]) return std::nullopt;

  SubTrace sub;
  sub.start = start;
  sub.end = end;
  for (Pos p = start; p <= end; ++p)
    if (!consumed[p]) sub.events.push_back(SliceEvent{p, t.events[p]});
  return sub;
}

CausalityGraph build_sub_causality_graph(const MessageTable& table, const SubTrace& s,
                                         const RoleIds& roles, const EdgeFilter& filter) {
  std::set<MsgId> types;
  for (const auto& e : s.events) types.insert(e.msg);

  std::set<MsgId> roots, terminals;
  for (MsgId m : types) {
    if (roles.initial.count(m)) roots.insert(m);
    if (roles.terminal.count(m)) terminals.insert(m);
  }
  return build_graph(table, {types.begin(), types.end()}, roots, terminals, filter);
}

PairPartners pair_partners(const LocalMiningResult& local, std::size_t trace_index) {
  PairPartners out;
  for (const auto& [key, pairs] : local.matches.at(trace_index)) {
    auto& map = out[key];
    for (const auto& p : pairs) map.emplace(p.src_pos, p.dst_pos);
  }
  return out;
}

namespace {

// In-order claiming: the first path message claims the sub-trace's first
// position and the last claims the matched terminal. Interior messages claim
// the earliest matching event before the bound, except that a valid-pattern
// edge must claim the destination recorded for its chosen source during local
// mining; sources whose recorded partner escapes the window are skipped.
std::optional<std::vector<Pos>> embed_path(const SubTrace& sub, const std::vector<MsgId>& path,
                                           const PairPartners* partners) {
  const std::size_t n = path.size();
  std::vector<Pos> chosen(n, 0);
  chosen[0] = sub.start;

  auto lock_for = [&](std::size_t t) -> const std::unordered_map<Pos, Pos>* {
    if (!partners) return nullptr;
    auto it = partners->find(PatternKey{path[t - 1], path[t]});
    return it == partners->end() ? nullptr : &it->second;
  };
  auto index_after = [&](Pos p) {
    return std::size_t(std::upper_bound(sub.events.begin(), sub.events.end(), p,
                                        [](Pos v, const SliceEvent& e) { return v < e.pos; }) -
                       sub.events.begin());
  };
  auto in_window = [&](Pos p) {
    auto it = std::lower_bound(sub.events.begin(), sub.events.end(), p,
                               [](const SliceEvent& e, Pos v) { return e.pos < v; });
    return it != sub.events.end() && it->pos == p;
  };

  auto place = [&](auto&& self, std::size_t t, std::size_t from) -> bool {
    if (t + 1 == n) {
      if (const auto* lock = lock_for(t)) {
        auto it = lock->find(chosen[t - 1]);
        if (it == lock->end() || it->second != sub.end) return false;
      }
      chosen[t] = sub.end;
      return true;
    }
    if (const auto* lock = lock_for(t)) {
      auto it = lock->find(chosen[t - 1]);
      if (it == lock->end()) return false;
      Pos p = it->second;
      if (p >= sub.end || !in_window(p)) return false;
      chosen[t] = p;
      return self(self, t + 1, index_after(p));
    }

    // When this message starts a locked instance pair, rank the usable pairs
    // by how many pending windows could also claim them: taking the pair no
    // one else can reach leaves the contested ones for tighter windows.
    if (const auto* next_lock = (t + 2 <= n) ? lock_for(t + 1) : nullptr) {
      std::vector<std::pair<int, std::size_t>> ranked;  // (users, event index)
      for (std::size_t k = from; k < sub.events.size() && sub.events[k].pos < sub.end; ++k) {
        if (sub.events[k].msg != path[t]) continue;
        auto pit = next_lock->find(sub.events[k].pos);
        if (pit == next_lock->end()) continue;
        Pos partner = pit->second;
        if (partner > sub.end) continue;
        int users = 0;
        for (const auto& [ipos, ibound] : sub.pending)
          if (ipos <= sub.events[k].pos && ibound >= partner) ++users;
        ranked.push_back({users, k});
      }
      std::stable_sort(ranked.begin(), ranked.end(),
                       [](const auto& x, const auto& y) { return x.first < y.first; });
      for (auto [users, k] : ranked) {
        chosen[t] = sub.events[k].pos;
        if (self(self, t + 1, k + 1)) return true;
      }
      return false;
    }

    for (std::size_t k = from; k < sub.events.size() && sub.events[k].pos < sub.end; ++k) {
      if (sub.events[k].msg != path[t]) continue;
      chosen[t] = sub.events[k].pos;
      if (self(self, t + 1, k + 1)) return true;
    }
    return false;
  };

  if (n == 1 || place(place, 1, index_after(sub.start))) return chosen;
  return std::nullopt;
}

// Union of message types over the finite ranked paths starting at each
// initial type: the events a pending instance could still explain.
std::map<MsgId, std::set<MsgId>> path_closures(const RankedPathPool& pool) {
  std::map<MsgId, std::set<MsgId>> out;
  for (const auto& p : pool.paths) {
    if (std::isinf(p.energy)) break;  // sorted: infinite tail
    auto& closure = out[p.msgs.front()];
    closure.insert(p.msgs.begin(), p.msgs.end());
  }
  return out;
}

// Orphans of a claim: window occurrences left over that no pending initial's
// remaining flow instance could explain. Each pending initial accounts for at
// most one occurrence of each type its finite candidate paths can visit, and
// only within its own matched span.
int orphan_count(const SubTrace& sub, const std::vector<Pos>& claimed,
                 const std::map<MsgId, std::set<MsgId>>& closures) {
  std::set<Pos> taken(claimed.begin(), claimed.end());

  std::map<MsgId, std::vector<Pos>> remaining;
  for (const auto& e : sub.events)
    if (!taken.count(e.pos)) remaining[e.msg].push_back(e.pos);

  struct Span {
    Pos from, to;
    const std::set<MsgId>* types;
  };
  std::vector<Span> spans;
  for (const auto& [pos, bound] : sub.pending) {
    if (taken.count(pos)) continue;
    auto eit = std::lower_bound(sub.events.begin(), sub.events.end(), pos,
                                [](const SliceEvent& e, Pos v) { return e.pos < v; });
    if (eit == sub.events.end() || eit->pos != pos) continue;
    auto cit = closures.find(eit->msg);
    if (cit == closures.end()) continue;
    spans.push_back(Span{pos, bound, &cit->second});
  }

  int orphans = 0;
  for (const auto& [type, positions] : remaining) {
    std::vector<bool> used(spans.size(), false);
    for (Pos p : positions) {
      // Prefer the tightest span that can still take this occurrence.
      std::size_t pick = spans.size();
      for (std::size_t k = 0; k < spans.size(); ++k) {
        if (used[k] || spans[k].from > p || p > spans[k].to) continue;
        if (!spans[k].types->count(type)) continue;
        if (pick == spans.size() || spans[k].to < spans[pick].to) pick = k;
      }
      if (pick == spans.size())
        ++orphans;
      else
        used[pick] = true;
    }
  }
  return orphans;
}

}  // namespace

std::optional<Selection> select_candidate(const MessageTable& table,
                                          const std::vector<std::vector<MsgId>>& sub_paths,
                                          const RankedPathPool& pool, const CausalityGraph&,
                                          const SubTrace& sub, const RoleIds&,
                                          const PairPartners* partners,
                                          const std::map<MsgId, std::set<MsgId>>* closures) {
  MsgId start_type = sub.events.front().msg;
  MsgId end_type = sub.events.back().msg;

  std::map<MsgId, std::set<MsgId>> local_closures;
  if (!closures) {
    local_closures = path_closures(pool);
    closures = &local_closures;
  }

  std::optional<Selection> best;
  for (const auto& path : sub_paths) {
    if (path.front() != start_type || path.back() != end_type) continue;
    const CandidatePath* ranked = pool.find(path);
    if (!ranked || std::isinf(ranked->energy)) continue;
    auto positions = embed_path(sub, path, partners);
    if (!positions) continue;

    Selection cand;
    cand.path = path;
    cand.positions = *positions;
    cand.energy = ranked->energy;
    cand.orphans = orphan_count(sub, cand.positions, *closures);

    if (!best) {
      best = std::move(cand);
      continue;
    }
    auto better = [&]() {
      if (cand.orphans != best->orphans) return cand.orphans < best->orphans;
      if (cand.energy != best->energy) return cand.energy < best->energy;
      if (cand.path.size() != best->path.size()) return cand.path.size() > best->path.size();
      for (std::size_t i = 0; i < cand.path.size(); ++i) {
        const Message& mx = table.message(cand.path[i]);
        const Message& my = table.message(best->path[i]);
        if (mx != my) return mx < my;
      }
      return false;
    };
    if (better()) best = std::move(cand);
  }
  return best;
}

void FlowModel::add(const std::vector<MsgId>& msgs, double energy) {
  auto it = index_.find(msgs);
  if (it == index_.end()) {
    index_.emplace(msgs, flows.size());
    flows.push_back(Flow{msgs, energy, 1});
  } else {
    flows[it->second].instances += 1;
  }
}

const Flow* FlowModel::find(const std::vector<MsgId>& msgs) const {
  auto it = index_.find(msgs);
  if (it == index_.end()) return nullptr;
  return &flows[it->second];
}

namespace {

// First-unconsumed-at-or-after jump table with path compression; keeps window
// collection linear in the number of unconsumed events touched.
struct SkipList {
  std::vector<Pos> parent;

  explicit SkipList(std::size_t n) : parent(n + 1) {
    for (std::size_t i = 0; i <= n; ++i) parent[i] = static_cast<Pos>(i);
  }

  Pos find(Pos i) {
    Pos root = i;
    while (parent[root] != root) root = parent[root];
    while (parent[i] != root) {
      Pos next = parent[i];
      parent[i] = root;
      i = next;
    }
    return root;
  }

  void consume(Pos p) { parent[p] = p + 1; }
};

void finalize(TraceEvaluation& te, const std::vector<bool>& accepted) {
  for (Pos p = 0; p < accepted.size(); ++p)
    if (accepted[p]) te.accepted.push_back(p);
  std::sort(te.unaccepted.begin(), te.unaccepted.end());
  te.ratio = te.events ? double(te.accepted.size()) / double(te.events) : 0.0;
}

void aggregate(AcceptanceReport& report) {
  std::uint64_t total = 0, accepted = 0;
  double ratio_sum = 0;
  for (const auto& te : report.traces) {
    total += te.events;
    accepted += te.accepted.size();
    ratio_sum += te.ratio;
  }
  report.aggregate_ratio = total ? double(accepted) / double(total) : 0.0;
  report.mean_trace_ratio = report.traces.empty() ? 0.0 : ratio_sum / double(report.traces.size());
}

}  // namespace

EvalResult evaluate(const TraceSet& set, const RankedPathPool& pool, const EvalBounds& bounds,
                    const RoleIds& roles, std::uint64_t path_cap, const EdgeFilter& filter) {
  EvalResult result;
  const std::map<MsgId, std::set<MsgId>> closures = path_closures(pool);

  for (std::size_t ti = 0; ti < set.traces.size(); ++ti) {
    const Trace& trace = set.traces[ti];
    const std::size_t n = trace.events.size();
    const auto& trace_bounds = bounds.per_trace[ti];
    PairPartners partners;
    if (bounds.source) partners = pair_partners(*bounds.source, ti);

    TraceEvaluation te;
    te.trace_id = trace.id;
    te.events = n;

    std::vector<bool> consumed(n, false), accepted(n, false);
    SkipList skip(n);

    for (Pos i = 0; i < n; ++i) {
      if (consumed[i]) continue;
      MsgId m = trace.events[i];
      if (!roles.initial.count(m)) {
        te.unaccepted.push_back(i);
        continue;
      }

      auto bound_it = trace_bounds.find(i);
      if (bound_it == trace_bounds.end() || consumed[bound_it->second]) {
        te.unaccepted.push_back(i);
        continue;
      }
      Pos end = bound_it->second;

      SubTrace sub;
      sub.start = i;
      sub.end = end;
      for (Pos p = i; p <= end; p = skip.find(p + 1)) {
        sub.events.push_back(SliceEvent{p, trace.events[p]});
        if (p != i && roles.initial.count(trace.events[p])) {
          auto other = trace_bounds.find(p);
          if (other != trace_bounds.end() && !consumed[other->second])
            sub.pending.push_back({p, other->second});
        }
      }
      result.report.eval_event_visits += sub.events.size();

      CausalityGraph sub_graph = build_sub_causality_graph(set.table, sub, roles, filter);
      auto sub_paths = enumerate_paths(sub_graph, path_cap);
      auto sel = select_candidate(set.table, sub_paths, pool, sub_graph, sub, roles,
                                  bounds.source ? &partners : nullptr, &closures);
      if (!sel) {
        te.unaccepted.push_back(i);
        continue;
      }

      for (Pos p : sel->positions) {
        consumed[p] = true;
        accepted[p] = true;
        skip.consume(p);
      }
      result.report.histogram[sel->path.size()] += 1;
      result.model.add(sel->path, sel->energy);
      te.selections.push_back(std::move(*sel));
    }

    finalize(te, accepted);
    result.report.traces.push_back(std::move(te));
  }

  aggregate(result.report);
  return result;
}

EvalResult evaluate_sequential(const TraceSet& set, const RankedPathPool& pool,
                               const RoleIds& roles) {
  EvalResult result;

  struct OpenInstance {
    const CandidatePath* path;
    std::size_t next;
    std::vector<Pos> claimed;
  };

  for (const Trace& trace : set.traces) {
    const std::size_t n = trace.events.size();
    TraceEvaluation te;
    te.trace_id = trace.id;
    te.events = n;

    std::vector<bool> accepted(n, false);
    std::vector<OpenInstance> open;

    for (Pos i = 0; i < n; ++i) {
      MsgId m = trace.events[i];

      bool claimed = false;
      for (std::size_t k = 0; k < open.size(); ++k) {
        OpenInstance& inst = open[k];
        if (inst.path->msgs[inst.next] != m) continue;
        inst.claimed.push_back(i);
        ++inst.next;
        if (inst.next == inst.path->msgs.size()) {
          for (Pos p : inst.claimed) accepted[p] = true;
          result.report.histogram[inst.path->msgs.size()] += 1;
          result.model.add(inst.path->msgs, inst.path->energy);
          te.selections.push_back(Selection{inst.path->msgs, inst.claimed, inst.path->energy, 0});
          open.erase(open.begin() + static_cast<std::ptrdiff_t>(k));
        }
        claimed = true;
        break;
      }
      if (claimed) continue;

      if (roles.initial.count(m)) {
        const CandidatePath* best = pool.cheapest_from(m);
        if (best) {
          open.push_back(OpenInstance{best, 1, {i}});
          continue;
        }
      }
      te.unaccepted.push_back(i);
    }

    for (const auto& inst : open)
      for (Pos p : inst.claimed) te.unaccepted.push_back(p);

    finalize(te, accepted);
    result.report.traces.push_back(std::move(te));
  }

  aggregate(result.report);
  return result;
}

}  // namespace flowmine
