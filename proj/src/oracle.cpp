#include "inet/oracle.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <atomic>
#include <random>
#include <thread>

namespace inet {
namespace {

NodeKind kind_of(const RedexReport& r) {
  if (!r.interactions.empty()) return NodeKind::reducible;
  if (!r.norule.empty()) return NodeKind::stuck_norule;
  if (!r.deadlocks.empty()) return NodeKind::stuck_deadlock;
  return NodeKind::normal;
}

// One interaction followed by eager indirection, not yet canonical.
Configuration raw_successor(const Configuration& node, std::size_t equation, const InteractionSystem& s,
                            StepInfo* info = nullptr) {
  NameSupply fresh = NameSupply::after(node);
  auto stepped = apply_interaction(node, equation, s, fresh);
  if (info != nullptr) *info = stepped.info;
  return resolve_indirections(stepped.config);
}

std::uint64_t splitmix(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::holds:
      return "holds";
    case Verdict::fails:
      return "fails";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "?";
}

ReductionGraph build_reduction_graph(const Configuration& c, const InteractionSystem& s, std::size_t max_nodes,
                                     std::size_t canonical_cap) {
  ReductionGraph g;
  std::map<std::vector<std::int64_t>, std::size_t> index;
  auto add_node = [&](std::vector<std::int64_t> key, Configuration node) {
    auto report = find_redexes(node, s);
    index.emplace(std::move(key), g.nodes.size());
    g.nodes.push_back(std::move(node));
    g.kinds.push_back(kind_of(report));
    g.out.emplace_back();
  };

  try {
    auto start = resolve_indirections(c);
    auto form = canonical_net_form(start, canonical_cap);
    add_node(std::move(form.key), std::move(form.config));
  } catch (const CapExceeded&) {
    g.truncated = true;
    return g;
  }

  std::deque<std::size_t> queue{0};
  while (!queue.empty() && !g.truncated) {
    const std::size_t from = queue.front();
    queue.pop_front();
    const auto redexes = find_redexes(g.nodes[from], s).interactions;
    for (const auto& r : redexes) {
      StepInfo info;
      Configuration next = raw_successor(g.nodes[from], r.equation, s, &info);
      std::vector<std::int64_t> key;
      try {
        key = canonical_net_key(next, canonical_cap);
      } catch (const CapExceeded&) {
        g.truncated = true;
        break;
      }
      std::size_t to;
      if (auto it = index.find(key); it != index.end()) {
        to = it->second;
      } else {
        if (g.nodes.size() >= max_nodes) {
          g.truncated = true;
          break;
        }
        to = g.nodes.size();
        add_node(std::move(key), canonical_net_form(next, canonical_cap).config);
        queue.push_back(to);
      }
      g.out[from].push_back(g.edges.size());
      g.edges.push_back({from, info, to});
    }
  }
  return g;
}

Configuration replay_edge(const ReductionGraph& g, const GraphEdge& e, const InteractionSystem& s,
                          std::size_t canonical_cap) {
  return canonical_net_form(raw_successor(g.nodes[e.from], e.step.equation, s), canonical_cap).config;
}

DiamondReport check_diamond(const ReductionGraph& g) {
  if (g.truncated) return {Verdict::inconclusive, std::nullopt};
  auto targets = [&](std::size_t node) {
    std::set<std::size_t> out;
    for (auto e : g.out[node]) out.insert(g.edges[e].to);
    return out;
  };
  for (std::size_t node = 0; node < g.nodes.size(); ++node) {
    const auto& edges = g.out[node];
    for (std::size_t i = 0; i < edges.size(); ++i) {
      for (std::size_t j = i + 1; j < edges.size(); ++j) {
        const auto c1 = g.edges[edges[i]].to;
        const auto c2 = g.edges[edges[j]].to;
        if (c1 == c2) continue;
        const auto t1 = targets(c1);
        const auto t2 = targets(c2);
        const bool joined = std::any_of(t1.begin(), t1.end(), [&](std::size_t t) { return t2.contains(t); });
        if (!joined) return {Verdict::fails, DiamondCounterexample{node, edges[i], edges[j]}};
      }
    }
  }
  return {Verdict::holds, std::nullopt};
}

NormalFormReport check_unique_normal_form(const ReductionGraph& g) {
  NormalFormReport report;
  if (g.truncated) {
    report.verdict = Verdict::inconclusive;
    return report;
  }
  for (std::size_t node = 0; node < g.nodes.size(); ++node) {
    if (!g.out[node].empty()) continue;
    if (g.kinds[node] == NodeKind::normal) {
      report.normal_forms.push_back(node);
    } else if (g.kinds[node] != NodeKind::reducible) {
      report.stuck.push_back(node);
    }
  }
  report.verdict = report.normal_forms.size() <= 1 ? Verdict::holds : Verdict::fails;
  return report;
}

std::optional<std::set<std::size_t>> maximal_path_lengths(const ReductionGraph& g) {
  if (g.truncated || g.nodes.empty()) return std::nullopt;
  enum Mark { unvisited, active, done };
  std::vector<Mark> mark(g.nodes.size(), unvisited);
  std::vector<std::set<std::size_t>> lengths(g.nodes.size());
  bool cyclic = false;

  // iterative post-order DFS
  std::vector<std::pair<std::size_t, std::size_t>> stack{{g.root, 0}};
  mark[g.root] = active;
  while (!stack.empty() && !cyclic) {
    auto& [node, next_edge] = stack.back();
    if (next_edge < g.out[node].size()) {
      const auto to = g.edges[g.out[node][next_edge++]].to;
      if (mark[to] == active) {
        cyclic = true;
      } else if (mark[to] == unvisited) {
        mark[to] = active;
        stack.push_back({to, 0});
      }
      continue;
    }
    if (g.out[node].empty()) lengths[node].insert(0);
    for (auto e : g.out[node])
      for (auto l : lengths[g.edges[e].to]) lengths[node].insert(l + 1);
    mark[node] = done;
    stack.pop_back();
  }
  if (cyclic) return std::nullopt;
  return lengths[g.root];
}

std::optional<std::size_t> shortest_cycle_through_root(const ReductionGraph& g) {
  if (g.nodes.empty()) return std::nullopt;
  std::vector<std::optional<std::size_t>> dist(g.nodes.size());
  std::deque<std::size_t> queue{g.root};
  dist[g.root] = 0;
  std::optional<std::size_t> best;
  while (!queue.empty()) {
    const auto node = queue.front();
    queue.pop_front();
    for (auto e : g.out[node]) {
      const auto to = g.edges[e].to;
      if (to == g.root) {
        const auto len = *dist[node] + 1;
        if (!best || len < *best) best = len;
      } else if (!dist[to]) {
        dist[to] = *dist[node] + 1;
        queue.push_back(to);
      }
    }
  }
  return best;
}

StepInvarianceReport check_step_invariance(const Configuration& c, const InteractionSystem& s, std::size_t trials,
                                           std::uint64_t seed, std::size_t fuel) {
  std::vector<Strategy> strategies{Strategy::fifo(), Strategy::lifo(), Strategy::by_index()};
  std::uint64_t state = seed;
  for (std::size_t t = 0; t < trials; ++t) strategies.push_back(Strategy::random(splitmix(state)));

  StepInvarianceReport report;
  std::optional<Configuration> first_final;
  std::optional<Status> first_status;
  for (const auto& strategy : strategies) {
    auto result = normalize(c, s, strategy, fuel);
    ++report.runs;
    if (result.status == Status::fuel_exhausted) {
      report.verdict = Verdict::inconclusive;
      return report;
    }
    report.interaction_counts.insert(result.interactions);
    auto final = canonical_net_form(result.final).config;
    if (!first_final) {
      first_final = std::move(final);
      first_status = result.status;
    } else if (final != *first_final || result.status != *first_status) {
      report.finals_agree = false;
    }
  }
  report.verdict = report.interaction_counts.size() == 1 && report.finals_agree ? Verdict::holds : Verdict::fails;
  return report;
}

Configuration generate_random_configuration(const InteractionSystem& s, std::size_t max_agents,
                                            std::size_t interface_size, std::uint64_t seed) {
  const Signature& sig = s.signature();
  if (sig.empty()) throw Error("cannot generate configurations over an empty signature");
  std::mt19937_64 rng(seed);
  auto uniform = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  auto flips_parity = [&](AgentId a) { return sig[a].arity % 2 == 0; };  // arity - 1 is odd

  std::vector<AgentId> even_types, odd_types;
  for (std::uint32_t a = 0; a < sig.size(); ++a) (flips_parity(AgentId{a}) ? even_types : odd_types).push_back({a});

  std::vector<AgentId> agents(max_agents == 0 ? 0 : 1 + uniform(max_agents));
  for (auto& a : agents) a = AgentId{static_cast<std::uint32_t>(uniform(sig.size()))};

  // Sum of (arity - 1) over the agents must have the parity of the
  // interface size, otherwise the dangling ports cannot be paired.
  std::size_t parity = 0;
  for (auto a : agents) parity += flips_parity(a) ? 1 : 0;
  if (parity % 2 != interface_size % 2) {
    auto has = [&](bool even) {
      return std::find_if(agents.begin(), agents.end(), [&](AgentId a) { return flips_parity(a) == even; });
    };
    if (!even_types.empty() && agents.size() < max_agents) {
      agents.push_back(even_types[uniform(even_types.size())]);
    } else if (auto it = has(true); it != agents.end() && agents.size() > 1) {
      agents.erase(it);
    } else if (auto it = has(true); it != agents.end() && !odd_types.empty()) {
      *it = odd_types[uniform(odd_types.size())];
    } else if (auto it = has(false); it != agents.end() && !even_types.empty()) {
      *it = even_types[uniform(even_types.size())];
    } else {
      interface_size = interface_size > 0 ? interface_size - 1 : 1;
    }
  }

  struct Node {
    AgentId type;
    std::vector<int> children;  // -1: name slot
  };
  std::vector<Node> nodes;
  std::vector<int> roots;
  std::vector<std::pair<int, int>> open;
  for (auto a : agents) {
    const int id = static_cast<int>(nodes.size());
    nodes.push_back({a, std::vector<int>(sig[a].arity, -1)});
    if (roots.empty() || open.empty() || uniform(3) == 0) {
      roots.push_back(id);
    } else {
      const auto k = uniform(open.size());
      const auto [parent, port] = open[k];
      open.erase(open.begin() + static_cast<std::ptrdiff_t>(k));
      nodes[parent].children[port] = id;
    }
    for (int port = 0; port < static_cast<int>(sig[a].arity); ++port) open.push_back({id, port});
  }

  // Sides are trees (root index >= 0) or bare names (-1 - slot index).
  std::vector<int> sides = roots;
  std::size_t name_sides = roots.size() % 2;
  while (open.size() + name_sides < interface_size) name_sides += 2;
  const std::size_t slot_count = open.size() + name_sides;
  for (std::size_t k = 0; k < name_sides; ++k) sides.push_back(-1 - static_cast<int>(open.size() + k));

  std::vector<std::size_t> order(slot_count);
  for (std::size_t k = 0; k < slot_count; ++k) order[k] = k;
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<NameId> slot_name(slot_count);
  Configuration c;
  for (std::size_t k = 0; k < slot_count; ++k) {
    const std::size_t slot = order[k];
    if (k < interface_size) {
      NameId n{static_cast<std::uint32_t>(k)};
      slot_name[slot] = n;
      c.interface.push_back(n);
      c.labels.emplace(n, "r" + std::to_string(k));
    } else {
      slot_name[slot] = NameId{static_cast<std::uint32_t>(interface_size + (k - interface_size) / 2)};
    }
  }

  std::map<std::pair<int, int>, std::size_t> slot_of;
  for (std::size_t k = 0; k < open.size(); ++k) slot_of.emplace(open[k], k);
  auto build = [&](auto&& self, int node) -> Term {
    std::vector<Term> args;
    for (int port = 0; port < static_cast<int>(nodes[node].children.size()); ++port) {
      const int child = nodes[node].children[port];
      args.push_back(child >= 0 ? self(self, child) : Term::name(slot_name[slot_of.at({node, port})]));
    }
    return Term::agent(nodes[node].type, std::move(args));
  };

  std::shuffle(sides.begin(), sides.end(), rng);
  for (std::size_t k = 0; k + 1 < sides.size(); k += 2) {
    auto term_of = [&](int side) {
      return side >= 0 ? build(build, side) : Term::name(slot_name[static_cast<std::size_t>(-1 - side)]);
    };
    c.equations.push_back({term_of(sides[k]), term_of(sides[k + 1])});
  }
  return c;
}

AuditReport audit_confluence(const InteractionSystem& s, std::size_t samples, std::size_t max_agents,
                             std::size_t max_nodes, std::uint64_t seed, unsigned threads) {
  AuditReport report;
  report.samples.resize(samples);
  std::vector<std::uint64_t> seeds(samples);
  std::uint64_t state = seed;
  for (auto& sd : seeds) sd = splitmix(state);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < samples; i = next++) {
      AuditSample& out = report.samples[i];
      out.index = i;
      out.config = generate_random_configuration(s, max_agents, i % 3, seeds[i]);
      auto g = build_reduction_graph(out.config, s, max_nodes);
      out.nodes = g.nodes.size();
      out.truncated = g.truncated;
      out.diamond = check_diamond(g);
      out.normal_forms = check_unique_normal_form(g);
      if (const auto& ce = out.diamond.counterexample) {
        out.witness = {g.nodes[ce->node], g.nodes[g.edges[ce->edge1].to], g.nodes[g.edges[ce->edge2].to]};
      } else if (out.normal_forms.verdict == Verdict::fails) {
        for (auto n : out.normal_forms.normal_forms) out.witness.push_back(g.nodes[n]);
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (const auto& sample : report.samples) {
    if (sample.failed()) {
      ++report.failed;
    } else if (sample.inconclusive()) {
      ++report.inconclusive;
    } else {
      ++report.passed;
    }
  }
  return report;
}

}  // namespace inet
