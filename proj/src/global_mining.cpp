#include "flowmine/global_mining.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "flowmine/errors.hpp"

namespace flowmine {

std::vector<std::vector<MsgId>> enumerate_paths(const CausalityGraph& g, std::uint64_t cap) {
  std::vector<std::vector<MsgId>> out;
  std::vector<MsgId> cur;

  auto dfs = [&](auto&& self, MsgId v) -> void {
    cur.push_back(v);
    if (cur.size() >= 2 && g.terminals.count(v)) {
      if (out.size() >= cap)
        throw LimitError("candidate path count exceeds cap (" + std::to_string(cap) + ")");
      out.push_back(cur);
    }
    auto it = g.out.find(v);
    if (it != g.out.end())
      for (MsgId w : it->second) self(self, w);
    cur.pop_back();
  };

  for (MsgId r : g.nodes)
    if (g.roots.count(r)) dfs(dfs, r);
  return out;
}

double path_energy_terms(const std::vector<double>& edge_conf, std::uint64_t vbp_total,
                         std::size_t msg_count, const std::vector<double>& edge_dist) {
  if (vbp_total == 0) return std::numeric_limits<double>::infinity();
  double n = double(edge_conf.size());
  double conf_term = 0;
  for (double c : edge_conf) conf_term += -std::log2(c);
  conf_term /= n;
  double support_term = -std::log2(double(vbp_total) / double(msg_count));
  double dist_term = 0;
  for (double d : edge_dist) dist_term += d;
  dist_term /= n;
  return conf_term + support_term + dist_term;
}

double path_energy(const CausalityGraph& g, const std::vector<MsgId>& path) {
  std::vector<double> conf, dist;
  std::uint64_t vbp_total = 0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const EdgeInfo& e = g.edges.at({path[i], path[i + 1]});
    conf.push_back(e.conf());
    dist.push_back(e.mean_dist);
    vbp_total += e.vbp_count;
  }
  return path_energy_terms(conf, vbp_total, path.size(), dist);
}

std::size_t PathSeqHash::operator()(const std::vector<MsgId>& seq) const {
  std::size_t h = 0xcbf29ce484222325ull;
  for (MsgId m : seq) {
    h ^= m;
    h *= 0x100000001b3ull;
  }
  return h;
}

const CandidatePath* RankedPathPool::find(const std::vector<MsgId>& seq) const {
  auto it = index_.find(seq);
  if (it == index_.end()) return nullptr;
  return &paths[it->second];
}

const CandidatePath* RankedPathPool::cheapest_from(MsgId start) const {
  for (const auto& p : paths) {
    if (std::isinf(p.energy)) break;  // sorted: infinite tail
    if (p.msgs.front() == start) return &p;
  }
  return nullptr;
}

void RankedPathPool::build_index() {
  index_.clear();
  for (std::size_t i = 0; i < paths.size(); ++i) index_[paths[i].msgs] = i;
}

RankedPathPool rank_paths(const MessageTable& table, const CausalityGraph& g,
                          const std::vector<std::vector<MsgId>>& paths) {
  RankedPathPool pool;
  pool.paths.reserve(paths.size());
  for (const auto& p : paths) pool.paths.push_back(CandidatePath{p, path_energy(g, p)});

  auto seq_content_less = [&](const std::vector<MsgId>& x, const std::vector<MsgId>& y) {
    std::size_t n = std::min(x.size(), y.size());
    for (std::size_t i = 0; i < n; ++i) {
      const Message& mx = table.message(x[i]);
      const Message& my = table.message(y[i]);
      if (mx != my) return mx < my;
    }
    return x.size() < y.size();
  };
  std::stable_sort(pool.paths.begin(), pool.paths.end(),
                   [&](const CandidatePath& x, const CandidatePath& y) {
                     if (x.energy != y.energy) return x.energy < y.energy;
                     if (x.msgs.size() != y.msgs.size()) return x.msgs.size() > y.msgs.size();
                     return seq_content_less(x.msgs, y.msgs);
                   });
  pool.build_index();
  return pool;
}

GlobalMiningResult global_mine(const TraceSet& set, const LocalMiningResult& local,
                               const RoleConfig& roles, std::uint64_t path_cap, bool global_only) {
  EdgeFilter filter;
  if (!global_only) filter = valid_pattern_edge_filter(set.table, local);
  CausalityGraph g = build_causality_graph(set, roles, filter);
  if (!global_only) g = prune_invalid_edges(std::move(g), local.invalid_keys());
  annotate_confidences(g, set, local, global_only);
  auto paths = enumerate_paths(g, path_cap);
  RankedPathPool pool = rank_paths(set.table, g, paths);
  return GlobalMiningResult{std::move(g), std::move(pool)};
}

}  // namespace flowmine
