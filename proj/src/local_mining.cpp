#include "flowmine/local_mining.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "flowmine/errors.hpp"

namespace flowmine {

double FifoScore::mean_dist() const {
  if (pairs.empty()) return 0.0;
  double sum = 0;
  for (const auto& p : pairs) sum += double(p.dst_pos) - double(p.src_pos);
  return sum / double(pairs.size());
}

FifoScore fifo_match(const std::vector<Pos>& src_pos, const std::vector<Pos>& dst_pos) {
  FifoScore s;
  s.freq_src = src_pos.size();
  s.freq_dst = dst_pos.size();
  std::size_t next_src = 0;
  for (Pos d : dst_pos) {
    if (next_src < src_pos.size() && src_pos[next_src] < d) {
      s.pairs.push_back(PosPair{src_pos[next_src], d});
      ++next_src;
    }
  }
  s.freq_pair = s.pairs.size();
  return s;
}

namespace {

// Occurrence positions per message type, in slice order.
std::map<MsgId, std::vector<Pos>> positions_by_type(const std::vector<SliceEvent>& slice) {
  std::map<MsgId, std::vector<Pos>> out;
  for (const auto& e : slice) out[e.msg].push_back(e.pos);
  return out;
}

// The direction test: some k-th occurrence of A precedes the k-th of B. Under
// one-to-one instance pairing this is the weakest evidence that A -> B can
// hold at all; a type that only ever trails its counterpart never qualifies.
bool aligned_precedes(const std::vector<Pos>& a, const std::vector<Pos>& b) {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t k = 0; k < n; ++k)
    if (a[k] < b[k]) return true;
  return false;
}

}  // namespace

std::vector<PatternKey> extract_causal_relations(const MessageTable& table,
                                                 const std::vector<SliceEvent>& slice) {
  auto pos = positions_by_type(slice);
  std::vector<MsgId> types;
  for (const auto& [m, _] : pos) types.push_back(m);
  std::sort(types.begin(), types.end(),
            [&](MsgId x, MsgId y) { return table.content_less(x, y); });

  std::vector<PatternKey> out;
  for (MsgId a : types) {
    for (MsgId b : types) {
      if (a == b) continue;
      if (!table.causal(a, b)) continue;
      if (!aligned_precedes(pos[a], pos[b])) continue;
      out.push_back(PatternKey{a, b});
    }
  }
  return out;
}

FifoScore score(const MessageTable&, const std::vector<SliceEvent>& slice, PatternKey rel) {
  std::vector<Pos> src, dst;
  for (const auto& e : slice) {
    if (e.msg == rel.src) src.push_back(e.pos);
    if (e.msg == rel.dst) dst.push_back(e.pos);
  }
  return fifo_match(src, dst);
}

FifoScore match_instances(const MessageTable& table, const std::vector<SliceEvent>& slice,
                          PatternKey p) {
  return score(table, slice, p);
}

CoverResult select_valid_patterns(const MessageTable& table, const std::vector<MsgId>& slice_types,
                                  const std::vector<ScoredCandidate>& scored) {
  auto content_pair_less = [&](const ScoredCandidate& x, const ScoredCandidate& y) {
    const Message& xs = table.message(x.key.src);
    const Message& ys = table.message(y.key.src);
    if (xs != ys) return xs < ys;
    return table.message(x.key.dst) < table.message(y.key.dst);
  };

  // Confidence first; among confidence ties the positionally tightest pairing
  // wins (a response matched across instances of another command strays far
  // from its request, a genuine pairing stays at instance scale).
  std::vector<ScoredCandidate> order(scored);
  std::sort(order.begin(), order.end(), [&](const ScoredCandidate& x, const ScoredCandidate& y) {
    double sx = x.fc + x.bc, sy = y.fc + y.bc;
    if (sx != sy) return sx > sy;
    if (x.freq_pair != y.freq_pair) return x.freq_pair > y.freq_pair;
    if (x.mean_dist != y.mean_dist) return x.mean_dist < y.mean_dist;
    return content_pair_less(x, y);
  });

  std::set<MsgId> want(slice_types.begin(), slice_types.end());
  std::set<MsgId> covered;
  std::vector<ScoredCandidate> selected;
  for (const auto& c : order) {
    if (covered.size() == want.size()) break;
    bool adds = (want.count(c.key.src) && !covered.count(c.key.src)) ||
                (want.count(c.key.dst) && !covered.count(c.key.dst));
    if (!adds) continue;
    selected.push_back(c);
    covered.insert(c.key.src);
    covered.insert(c.key.dst);
  }

  // Backward pass: a pick is redundant once later picks cover both of its
  // endpoints. Drop weakest first; among equals, the positionally loosest.
  std::vector<ScoredCandidate> removal(selected);
  std::sort(removal.begin(), removal.end(), [&](const ScoredCandidate& x, const ScoredCandidate& y) {
    double sx = x.fc + x.bc, sy = y.fc + y.bc;
    if (sx != sy) return sx < sy;
    if (x.mean_dist != y.mean_dist) return x.mean_dist > y.mean_dist;
    return content_pair_less(y, x);
  });
  std::vector<bool> kept(selected.size(), true);
  auto idx_of = [&](const PatternKey& k) {
    for (std::size_t i = 0; i < selected.size(); ++i)
      if (selected[i].key == k) return i;
    return selected.size();
  };
  for (const auto& cand : removal) {
    std::size_t i = idx_of(cand.key);
    std::set<MsgId> still;
    for (std::size_t j = 0; j < selected.size(); ++j) {
      if (!kept[j] || j == i) continue;
      still.insert(selected[j].key.src);
      still.insert(selected[j].key.dst);
    }
    bool redundant = true;
    for (MsgId m : {cand.key.src, cand.key.dst})
      if (covered.count(m) && !still.count(m)) redundant = false;
    if (redundant) kept[i] = false;
  }

  CoverResult out;
  std::set<std::pair<MsgId, MsgId>> valid_set;
  for (std::size_t i = 0; i < selected.size(); ++i) {
    if (!kept[i]) continue;
    out.valid.push_back(selected[i].key);
    valid_set.insert({selected[i].key.src, selected[i].key.dst});
  }
  for (const auto& c : order)
    if (!valid_set.count({c.key.src, c.key.dst})) out.invalid.push_back(c.key);
  for (MsgId m : want)
    if (!covered.count(m)) out.uncovered.push_back(m);
  return out;
}

const PatternStats* LocalMiningResult::find(PatternKey key) const {
  auto it = index_.find(key);
  if (it == index_.end()) return nullptr;
  return &patterns[it->second];
}

std::vector<PatternKey> LocalMiningResult::valid_keys() const {
  std::vector<PatternKey> out;
  for (const auto& p : patterns)
    if (p.valid) out.push_back(p.key);
  return out;
}

std::vector<PatternKey> LocalMiningResult::invalid_keys() const {
  std::vector<PatternKey> out;
  for (const auto& p : patterns)
    if (!p.valid) out.push_back(p.key);
  return out;
}

LocalMiningResult local_mine(const TraceSet& set) {
  if (set.traces.empty()) throw DataError("no traces");

  struct Accum {
    double fc_sum = 0, bc_sum = 0, dist_sum = 0;
    std::uint64_t trace_count = 0, freq_pair = 0;
    std::vector<std::pair<std::size_t, std::vector<PosPair>>> per_trace_pairs;
  };

  // Interface -> union of its message types across traces.
  std::map<InterfaceKey, std::set<MsgId>> iface_types;
  std::map<PatternKey, Accum, bool (*)(const PatternKey&, const PatternKey&)> accum(
      [](const PatternKey& x, const PatternKey& y) {
        return x.src != y.src ? x.src < y.src : x.dst < y.dst;
      });
  std::map<InterfaceKey, std::vector<PatternKey>> iface_candidates;

  for (std::size_t ti = 0; ti < set.traces.size(); ++ti) {
    Slices slices = slice(set, set.traces[ti]);
    for (const auto& [iface, events] : slices) {
      auto& types = iface_types[iface];
      for (const auto& e : events) types.insert(e.msg);

      for (PatternKey rel : extract_causal_relations(set.table, events)) {
        FifoScore sc = score(set.table, events, rel);
        auto [it, fresh] = accum.try_emplace(rel);
        if (fresh) iface_candidates[iface].push_back(rel);
        it->second.fc_sum += sc.fc();
        it->second.bc_sum += sc.bc();
        it->second.dist_sum += sc.mean_dist();
        it->second.freq_pair += sc.freq_pair;
        it->second.trace_count += 1;
        it->second.per_trace_pairs.push_back({ti, std::move(sc.pairs)});
      }
    }
  }

  LocalMiningResult out;
  out.matches.resize(set.traces.size());

  std::set<MsgId> uncovered_all;
  for (const auto& [iface, candidates] : iface_candidates) {
    std::vector<ScoredCandidate> scored;
    for (PatternKey key : candidates) {
      const Accum& a = accum.at(key);
      double n = double(a.trace_count);
      scored.push_back(ScoredCandidate{key, a.fc_sum / n, a.bc_sum / n, a.freq_pair, a.dist_sum / n});
    }
    std::vector<MsgId> types(iface_types[iface].begin(), iface_types[iface].end());
    CoverResult cover = select_valid_patterns(set.table, types, scored);

    for (const auto& c : scored) {
      bool valid = std::find(cover.valid.begin(), cover.valid.end(), c.key) != cover.valid.end();
      PatternStats stats;
      stats.key = c.key;
      stats.fc = c.fc;
      stats.bc = c.bc;
      stats.freq_pair = c.freq_pair;
      stats.mean_dist = c.mean_dist;
      stats.valid = valid;
      out.index_[c.key] = out.patterns.size();
      out.patterns.push_back(stats);
      if (valid)
        for (auto& [ti, pairs] : accum.at(c.key).per_trace_pairs)
          out.matches[ti][c.key] = pairs;
    }
    for (MsgId m : cover.uncovered) uncovered_all.insert(m);
  }

  // Interfaces whose slices produced no candidates at all leave every one of
  // their types uncovered.
  for (const auto& [iface, types] : iface_types)
    if (!iface_candidates.count(iface))
      for (MsgId m : types) uncovered_all.insert(m);

  out.uncovered.assign(uncovered_all.begin(), uncovered_all.end());

  std::sort(out.patterns.begin(), out.patterns.end(),
            [&](const PatternStats& x, const PatternStats& y) {
              const Message& xs = set.table.message(x.key.src);
              const Message& ys = set.table.message(y.key.src);
              if (xs != ys) return xs < ys;
              return set.table.message(x.key.dst) < set.table.message(y.key.dst);
            });
  out.index_.clear();
  for (std::size_t i = 0; i < out.patterns.size(); ++i) out.index_[out.patterns[i].key] = i;

  return out;
}

}  // namespace flowmine
