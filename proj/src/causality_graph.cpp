#include "flowmine/causality_graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

#include "flowmine/errors.hpp"

namespace flowmine {

void CausalityGraph::add_edge(MsgId a, MsgId b) {
  if (edges.emplace(std::make_pair(a, b), EdgeInfo{}).second) out[a].push_back(b);
}

void CausalityGraph::remove_edge(MsgId a, MsgId b) {
  if (edges.erase({a, b})) {
    auto& succ = out[a];
    succ.erase(std::remove(succ.begin(), succ.end(), b), succ.end());
  }
}

bool CausalityGraph::is_dag() const {
  std::map<MsgId, int> color;
  auto dfs = [&](auto&& self, MsgId v) -> bool {
    color[v] = 1;
    auto it = out.find(v);
    if (it != out.end()) {
      for (MsgId w : it->second) {
        if (color[w] == 1) return false;
        if (color[w] == 0 && !self(self, w)) return false;
      }
    }
    color[v] = 2;
    return true;
  };
  for (MsgId v : nodes)
    if (color[v] == 0 && !dfs(dfs, v)) return false;
  return true;
}

void CausalityGraph::drop_unreachable() {
  std::set<MsgId> reach(roots.begin(), roots.end());
  std::deque<MsgId> queue(roots.begin(), roots.end());
  while (!queue.empty()) {
    MsgId v = queue.front();
    queue.pop_front();
    auto it = out.find(v);
    if (it == out.end()) continue;
    for (MsgId w : it->second)
      if (reach.insert(w).second) queue.push_back(w);
  }

  std::erase_if(nodes, [&](MsgId v) { return !reach.count(v); });
  std::erase_if(terminals, [&](MsgId v) { return !reach.count(v); });
  for (auto it = edges.begin(); it != edges.end();) {
    if (!reach.count(it->first.first) || !reach.count(it->first.second))
      it = edges.erase(it);
    else
      ++it;
  }
  for (auto it = out.begin(); it != out.end();) {
    if (!reach.count(it->first)) {
      it = out.erase(it);
      continue;
    }
    std::erase_if(it->second, [&](MsgId w) { return !reach.count(w); });
    ++it;
  }
}

namespace {

// Is `to` reachable from `from` over the edges added so far (or equal)?
bool reaches(const CausalityGraph& g, MsgId from, MsgId to) {
  if (from == to) return true;
  std::set<MsgId> seen{from};
  std::deque<MsgId> queue{from};
  while (!queue.empty()) {
    MsgId v = queue.front();
    queue.pop_front();
    auto it = g.out.find(v);
    if (it == g.out.end()) continue;
    for (MsgId w : it->second) {
      if (w == to) return true;
      if (seen.insert(w).second) queue.push_back(w);
    }
  }
  return false;
}

}  // namespace

EdgeFilter valid_pattern_edge_filter(const MessageTable& table, const LocalMiningResult& local) {
  return [&table, &local](MsgId a, MsgId b) {
    if (interface_of(table, a) != interface_of(table, b)) return true;
    const PatternStats* stats = local.find(PatternKey{a, b});
    return stats != nullptr && stats->valid;
  };
}

CausalityGraph build_graph(const MessageTable& table, const std::vector<MsgId>& unique,
                           const std::set<MsgId>& roots, const std::set<MsgId>& terminals,
                           const EdgeFilter& filter) {
  std::vector<MsgId> ordered(unique);
  std::sort(ordered.begin(), ordered.end(),
            [&](MsgId a, MsgId b) { return table.content_less(a, b); });

  CausalityGraph g;
  g.roots = roots;
  g.terminals = terminals;

  std::vector<MsgId> root_order(roots.begin(), roots.end());
  std::sort(root_order.begin(), root_order.end(),
            [&](MsgId a, MsgId b) { return table.content_less(a, b); });

  std::set<MsgId> visited(roots.begin(), roots.end());
  std::deque<MsgId> queue(root_order.begin(), root_order.end());
  while (!queue.empty()) {
    MsgId a = queue.front();
    queue.pop_front();
    if (terminals.count(a)) continue;  // expansion stops at terminal messages
    for (MsgId b : ordered) {
      if (b == a || !table.causal(a, b)) continue;
      if (filter && !filter(a, b)) continue;
      if (reaches(g, b, a)) continue;  // would close a cycle
      g.add_edge(a, b);
      if (visited.insert(b).second) queue.push_back(b);
    }
  }

  for (MsgId v : ordered)
    if (visited.count(v)) g.nodes.push_back(v);
  std::erase_if(g.terminals, [&](MsgId v) { return !visited.count(v); });
  return g;
}

CausalityGraph build_causality_graph(const TraceSet& set, const RoleConfig& roles,
                                     const EdgeFilter& filter) {
  if (roles.initial.empty() || roles.terminal.empty())
    throw ConfigError("initial and terminal message sets must be non-empty");

  std::set<MsgId> seen;
  for (const auto& t : set.traces)
    for (MsgId m : t.events) seen.insert(m);

  std::set<MsgId> root_ids, terminal_ids;
  for (const auto& m : roles.initial) {
    auto id = set.table.find(m);
    if (!id || !seen.count(*id))
      throw DataError("initial message " + to_string(m) + " does not occur in the traces");
    root_ids.insert(*id);
  }
  for (const auto& m : roles.terminal) {
    auto id = set.table.find(m);
    if (id && seen.count(*id)) terminal_ids.insert(*id);
  }

  return build_graph(set.table, {seen.begin(), seen.end()}, root_ids, terminal_ids, filter);
}

CausalityGraph prune_invalid_edges(CausalityGraph g, const std::vector<PatternKey>& invalid) {
  for (const auto& key : invalid) g.remove_edge(key.src, key.dst);
  g.drop_unreachable();
  return g;
}

void annotate_confidences(CausalityGraph& g, const TraceSet& set, const LocalMiningResult& local,
                          bool global_only) {
  // Occurrence positions per type per trace, for global FIFO scoring.
  std::vector<std::map<MsgId, std::vector<Pos>>> positions(set.traces.size());
  for (std::size_t ti = 0; ti < set.traces.size(); ++ti) {
    const auto& events = set.traces[ti].events;
    for (Pos p = 0; p < events.size(); ++p) positions[ti][events[p]].push_back(p);
  }

  std::vector<std::pair<MsgId, MsgId>> drop;
  for (auto& [key, info] : g.edges) {
    auto [a, b] = key;
    const PatternStats* stats = global_only ? nullptr : local.find(PatternKey{a, b});
    if (stats && stats->valid) {
      info.fc = stats->fc;
      info.bc = stats->bc;
      info.mean_dist = stats->mean_dist;
      info.vbp_count = stats->freq_pair;
      info.support = stats->freq_pair;
      info.valid_bp = true;
      continue;
    }

    double fc_sum = 0, bc_sum = 0, dist_sum = 0;
    std::uint64_t traces_with_support = 0, total_pairs = 0;
    for (std::size_t ti = 0; ti < set.traces.size(); ++ti) {
      auto sa = positions[ti].find(a);
      auto sb = positions[ti].find(b);
      if (sa == positions[ti].end() || sb == positions[ti].end()) continue;
      FifoScore sc = fifo_match(sa->second, sb->second);
      if (sc.freq_pair == 0) continue;
      fc_sum += sc.fc();
      bc_sum += sc.bc();
      dist_sum += sc.mean_dist();
      total_pairs += sc.freq_pair;
      ++traces_with_support;
    }
    if (traces_with_support == 0) {
      drop.push_back(key);
      continue;
    }
    info.fc = fc_sum / double(traces_with_support);
    info.bc = bc_sum / double(traces_with_support);
    info.mean_dist = dist_sum / double(traces_with_support);
    info.support = total_pairs;
    info.vbp_count = global_only ? total_pairs : 0;
    info.valid_bp = false;
  }

  for (const auto& key : drop) g.remove_edge(key.first, key.second);
  if (!drop.empty()) g.drop_unreachable();
}

std::string to_dot(const CausalityGraph& g, const MessageTable& table) {
  std::ostringstream os;
  os << "digraph causality_graph {\n  rankdir=LR;\n  node [shape=box, fontname=\"monospace\"];\n";
  for (MsgId v : g.nodes) {
    os << "  \"" << to_string(table.message(v)) << "\"";
    if (g.roots.count(v))
      os << " [style=bold, color=blue]";
    else if (g.terminals.count(v))
      os << " [peripheries=2]";
    os << ";\n";
  }
  os.setf(std::ios::fixed);
  os.precision(2);
  for (const auto& [key, info] : g.edges) {
    os << "  \"" << to_string(table.message(key.first)) << "\" -> \""
       << to_string(table.message(key.second)) << "\" [label=\"" << info.fc << "/" << info.bc
       << "\"" << (info.valid_bp ? "" : ", style=dashed") << "];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace flowmine
