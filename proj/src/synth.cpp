#include "flowmine/synth.hpp"

#include <algorithm>
#include <set>

#include "flowmine/errors.hpp"

namespace flowmine {

namespace {

// splitmix64; fixed algorithm so seeded output is identical across platforms.
struct Rng {
  std::uint64_t state;

  explicit Rng(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Unbiased bounded sample via rejection.
  std::uint64_t below(std::uint64_t n) {
    std::uint64_t limit = ~0ull - ~0ull % n;
    std::uint64_t v;
    do {
      v = next();
    } while (v >= limit);
    return v % n;
  }
};

Message req(const char* src, const char* dest, const char* cmd) {
  return Message{src, dest, cmd, MessageKind::request};
}
Message resp(const char* src, const char* dest, const char* cmd) {
  return Message{src, dest, cmd, MessageKind::response};
}

FlowSpec linear_flow(const std::string& id, std::vector<Message> msgs) {
  FlowSpec f;
  f.id = id;
  f.nodes = std::move(msgs);
  for (int i = 0; i + 1 < static_cast<int>(f.nodes.size()); ++i) f.edges.push_back({i, i + 1});
  f.roots = {0};
  f.sinks = {static_cast<int>(f.nodes.size()) - 1};
  return f;
}

}  // namespace

std::vector<std::vector<int>> FlowSpec::paths() const {
  std::vector<std::vector<int>> adj(nodes.size());
  for (auto [a, b] : edges) adj[a].push_back(b);
  for (auto& v : adj) std::sort(v.begin(), v.end());

  std::set<int> sink_set(sinks.begin(), sinks.end());
  std::vector<std::vector<int>> out;
  std::vector<int> cur;

  auto dfs = [&](auto&& self, int v) -> void {
    cur.push_back(v);
    if (sink_set.count(v)) out.push_back(cur);
    for (int w : adj[v]) self(self, w);
    cur.pop_back();
  };
  for (int r : roots) dfs(dfs, r);
  return out;
}

void FlowSpec::validate() const {
  if (nodes.empty() || roots.empty() || sinks.empty())
    throw ConfigError("flow " + id + ": nodes, roots and sinks must be non-empty");
  for (auto [a, b] : edges) {
    if (a < 0 || b < 0 || a >= static_cast<int>(nodes.size()) || b >= static_cast<int>(nodes.size()))
      throw ConfigError("flow " + id + ": edge endpoint out of range");
    if (nodes[a].dest != nodes[b].src)
      throw ConfigError("flow " + id + ": edge " + to_string(nodes[a]) + " -> " +
                        to_string(nodes[b]) + " breaks structural causality");
  }

  // Cycle check via DFS coloring.
  std::vector<std::vector<int>> adj(nodes.size());
  for (auto [a, b] : edges) adj[a].push_back(b);
  std::vector<int> color(nodes.size(), 0);
  auto dfs = [&](auto&& self, int v) -> void {
    color[v] = 1;
    for (int w : adj[v]) {
      if (color[w] == 1) throw ConfigError("flow " + id + ": cycle detected");
      if (color[w] == 0) self(self, w);
    }
    color[v] = 2;
  };
  for (std::size_t v = 0; v < nodes.size(); ++v)
    if (color[v] == 0) dfs(dfs, static_cast<int>(v));

  // Every node must lie on some root-to-sink path.
  std::vector<bool> on_path(nodes.size(), false);
  for (const auto& p : paths())
    for (int v : p) on_path[v] = true;
  for (std::size_t v = 0; v < nodes.size(); ++v)
    if (!on_path[v])
      throw ConfigError("flow " + id + ": node " + to_string(nodes[v]) +
                        " lies on no root-to-sink path");
}

std::vector<FlowSpec> builtin_flows(Profile profile) {
  // The four CPU-initiated read scenarios. The two miss flows share the
  // cache-to-memory fill pair, so their instances compete for the same
  // messages under interleaving.
  std::vector<FlowSpec> flows;
  flows.push_back(linear_flow("cpu0_read_hit", {req("cpu0", "cache", "rd"), resp("cache", "cpu0", "rd")}));
  flows.push_back(linear_flow("cpu0_read_miss", {req("cpu0", "cache", "rd"), req("cache", "mem", "rd"),
                                                 resp("mem", "cache", "rd"), resp("cache", "cpu0", "rd")}));
  flows.push_back(linear_flow("cpu1_read_hit", {req("cpu1", "cache", "rd"), resp("cache", "cpu1", "rd")}));
  flows.push_back(linear_flow("cpu1_read_miss", {req("cpu1", "cache", "rd"), req("cache", "mem", "rd"),
                                                 resp("mem", "cache", "rd"), resp("cache", "cpu1", "rd")}));

  if (profile == Profile::large) {
    // Six peripheral-initiated flows: DMA reads served from an interconnect
    // buffer or from memory (the miss variants compete for the bus-to-memory
    // read pair), a posted DMA write, interrupt delivery to each CPU, and
    // device configuration reads against the cache controller.
    flows.push_back(linear_flow("dma_read_hit", {req("periph", "bus", "dma_rd"), resp("bus", "periph", "dma_rd")}));
    flows.push_back(linear_flow("dma_read_miss", {req("periph", "bus", "dma_rd"), req("bus", "mem", "rd"),
                                                  resp("mem", "bus", "rd"), resp("bus", "periph", "dma_rd")}));
    flows.push_back(linear_flow("dma_write", {req("periph", "mem", "dma_wr"), resp("mem", "periph", "dma_wr")}));
    flows.push_back(linear_flow("intr_cpu0", {req("periph", "cpu0", "intr"), resp("cpu0", "periph", "intr")}));
    flows.push_back(linear_flow("intr_cpu1", {req("periph", "cpu1", "intr"), resp("cpu1", "periph", "intr")}));
    flows.push_back(linear_flow("cfg_read", {req("periph", "cache", "cfg_rd"), resp("cache", "periph", "cfg_rd")}));
  }

  for (const auto& f : flows) f.validate();
  return flows;
}

RoleConfig roles_for(const std::vector<FlowSpec>& flows) {
  std::set<Message> initial, terminal;
  for (const auto& f : flows) {
    for (int r : f.roots) initial.insert(f.nodes[r]);
    for (int s : f.sinks) terminal.insert(f.nodes[s]);
  }
  RoleConfig roles;
  roles.initial.assign(initial.begin(), initial.end());
  roles.terminal.assign(terminal.begin(), terminal.end());
  return roles;
}

Generated generate(const std::vector<FlowSpec>& flows, int instances_per_flow,
                   std::uint64_t seed, InterleaveMode mode) {
  if (flows.empty()) throw ConfigError("no flows to generate from");
  if (instances_per_flow <= 0) throw ConfigError("instances_per_flow must be positive");
  for (const auto& f : flows) f.validate();

  Rng rng(seed);

  struct Instance {
    std::uint32_t flow = 0;
    std::uint32_t number = 0;
    std::vector<int> path;  // node indices
    std::uint32_t next = 0;

    bool exhausted() const { return next >= path.size(); }
  };

  // Choose one root-to-sink path per instance, uniformly.
  std::vector<std::vector<std::vector<int>>> flow_paths;
  flow_paths.reserve(flows.size());
  for (const auto& f : flows) flow_paths.push_back(f.paths());

  std::vector<Instance> instances;
  for (std::uint32_t fi = 0; fi < flows.size(); ++fi) {
    for (int k = 0; k < instances_per_flow; ++k) {
      Instance inst;
      inst.flow = fi;
      inst.number = static_cast<std::uint32_t>(k);
      inst.path = flow_paths[fi][rng.below(flow_paths[fi].size())];
      instances.push_back(std::move(inst));
    }
  }

  Generated gen;
  Trace trace;
  trace.id = "synthetic";

  auto emit = [&](Instance& inst) {
    const FlowSpec& f = flows[inst.flow];
    Pos pos = static_cast<Pos>(trace.events.size());
    trace.events.push_back(gen.traces.table.intern(f.nodes[inst.path[inst.next]]));
    gen.ground_truth.push_back(GroundTruthEntry{pos, f.id, inst.number, inst.next});
    ++inst.next;
  };

  if (mode == InterleaveMode::random_interleave) {
    // Index list of non-exhausted instances; swap-remove keeps picks O(1).
    std::vector<std::uint32_t> active(instances.size());
    for (std::uint32_t i = 0; i < active.size(); ++i) active[i] = i;
    while (!active.empty()) {
      std::uint64_t k = rng.below(active.size());
      Instance& inst = instances[active[k]];
      emit(inst);
      if (inst.exhausted()) {
        active[k] = active.back();
        active.pop_back();
      }
    }
  } else {
    // One in-flight instance per flow, flows taking turns.
    std::vector<std::uint32_t> cursor(flows.size(), 0);  // next instance per flow
    std::vector<std::vector<std::uint32_t>> per_flow(flows.size());
    for (std::uint32_t i = 0; i < instances.size(); ++i)
      per_flow[instances[i].flow].push_back(i);

    bool progressed = true;
    while (progressed) {
      progressed = false;
      for (std::uint32_t fi = 0; fi < flows.size(); ++fi) {
        while (cursor[fi] < per_flow[fi].size() && instances[per_flow[fi][cursor[fi]]].exhausted())
          ++cursor[fi];
        if (cursor[fi] == per_flow[fi].size()) continue;
        emit(instances[per_flow[fi][cursor[fi]]]);
        progressed = true;
      }
    }
  }

  gen.traces.traces.push_back(std::move(trace));
  return gen;
}

std::vector<std::vector<Message>> Generated::instantiated_paths() const {
  // Reconstruct each instance's message sequence from the sidecar.
  std::map<std::pair<std::string, std::uint32_t>, std::vector<std::pair<std::uint32_t, Pos>>> by_instance;
  for (const auto& e : ground_truth)
    by_instance[{e.flow_id, e.instance}].push_back({e.step, e.pos});

  const Trace& t = traces.traces.at(0);
  std::set<std::vector<Message>> distinct;
  for (auto& [key, steps] : by_instance) {
    std::sort(steps.begin(), steps.end());
    std::vector<Message> path;
    path.reserve(steps.size());
    for (auto [step, pos] : steps) path.push_back(traces.table.message(t.events[pos]));
    distinct.insert(std::move(path));
  }
  return {distinct.begin(), distinct.end()};
}

std::string ground_truth_jsonl(const Generated& gen) {
  std::string out;
  for (const auto& e : gen.ground_truth) {
    out += "{\"pos\":" + std::to_string(e.pos) + ",\"flow\":\"" + e.flow_id +
           "\",\"instance\":" + std::to_string(e.instance) +
           ",\"step\":" + std::to_string(e.step) + "}\n";
  }
  return out;
}

}  // namespace flowmine
