#include <doctest.h>

#include <algorithm>

#include "inet/canonical.hpp"
#include "inet/oracle.hpp"
#include "support.hpp"

using namespace inet;
using testing::comb;

namespace {
const InteractionSystem& S() { return testing::combinators(); }
}  // namespace

TEST_SUITE("oracle") {
  TEST_CASE("eps = eps") {
    auto g = build_reduction_graph(comb("<eps = eps>"), S());
    CHECK(g.nodes.size() == 2);
    CHECK(g.edges.size() == 1);
    CHECK_FALSE(g.truncated);
    CHECK(check_diamond(g).verdict == Verdict::holds);
  }

  TEST_CASE("erasing a small tree") {
    auto g = build_reduction_graph(comb("<eps = gam(eps,eps)>"), S());
    auto lengths = maximal_path_lengths(g);
    REQUIRE(lengths);
    CHECK(*lengths == std::set<std::size_t>{3});
    auto nf = check_unique_normal_form(g);
    CHECK(nf.verdict == Verdict::holds);
    REQUIRE(nf.normal_forms.size() == 1);
    CHECK(g.nodes[nf.normal_forms[0]].equations.empty());
    CHECK(check_diamond(g).verdict == Verdict::holds);
  }

  TEST_CASE("already normal") {
    auto g = build_reduction_graph(comb("<r = gam(eps,eps)> interface r;"), S());
    CHECK(g.nodes.size() == 1);
    CHECK(check_unique_normal_form(g).verdict == Verdict::holds);
    CHECK(check_diamond(g).verdict == Verdict::holds);
  }

  TEST_CASE("the example net cycles through the root") {
    auto g = build_reduction_graph(comb("<del(eps,x) = gam(x,eps)>"), S(), 100);
    auto cyc = shortest_cycle_through_root(g);
    REQUIRE(cyc);
    CHECK(*cyc == 4);
    CHECK_FALSE(maximal_path_lengths(g));
  }

  TEST_CASE("edges replay") {
    auto g = build_reduction_graph(comb("<del(r1,r2) = gam(eps, gam(eps,eps))> interface r1, r2;"), S());
    REQUIRE_FALSE(g.truncated);
    for (const auto& e : g.edges) CHECK(replay_edge(g, e, S()) == g.nodes[e.to]);
  }

  TEST_CASE("a corrupted graph is caught") {
    auto g = build_reduction_graph(comb("<eps = gam(eps,eps), eps = gam(eps,eps)>"), S());
    REQUIRE(check_diamond(g).verdict == Verdict::holds);
    // Find a fork whose two successors have exactly one common successor,
    // then cut every edge from the first successor into that join.
    auto targets = [&](std::size_t n) {
      std::set<std::size_t> t;
      for (auto e : g.out[n]) t.insert(g.edges[e].to);
      return t;
    };
    bool cut = false;
    for (std::size_t n = 0; n < g.nodes.size() && !cut; ++n) {
      auto succ = targets(n);
      for (auto c1 : succ) {
        for (auto c2 : succ) {
          if (c1 == c2 || cut) continue;
          std::vector<std::size_t> common;
          for (auto t : targets(c1))
            if (targets(c2).count(t)) common.push_back(t);
          if (common.size() != 1) continue;
          auto& out = g.out[c1];
          out.erase(std::remove_if(out.begin(), out.end(), [&](std::size_t e) { return g.edges[e].to == common[0]; }),
                    out.end());
          cut = true;
        }
      }
    }
    REQUIRE(cut);
    auto r = check_diamond(g);
    CHECK(r.verdict == Verdict::fails);
    REQUIRE(r.counterexample);
    auto ce = *r.counterexample;
    const auto& e1 = g.edges[ce.edge1];
    const auto& e2 = g.edges[ce.edge2];
    CHECK(e1.from == ce.node);
    CHECK(e2.from == ce.node);
    // Independent replay: both successors are real and differ.
    CHECK(replay_edge(g, e1, S()) == g.nodes[e1.to]);
    CHECK(replay_edge(g, e2, S()) == g.nodes[e2.to]);
    CHECK(e1.to != e2.to);
  }

  TEST_CASE("linear graphs hold vacuously") {
    ReductionGraph g;
    g.nodes.resize(3);
    g.kinds = {NodeKind::reducible, NodeKind::reducible, NodeKind::normal};
    g.out.resize(3);
    g.edges = {{0, {}, 1}, {1, {}, 2}};
    g.out[0] = {0};
    g.out[1] = {1};
    CHECK(check_diamond(g).verdict == Verdict::holds);
  }

  TEST_CASE("truncation") {
    auto g = build_reduction_graph(comb("<del(eps,x) = gam(x,eps)>"), S(), 2);
    CHECK(g.truncated);
    CHECK(g.nodes.size() <= 2);
    CHECK(check_diamond(g).verdict == Verdict::inconclusive);
  }

  TEST_CASE("step invariance") {
    Configuration tree;
    tree.equations.push_back({Term::agent(combinator_names().eps), testing::gamma_tree(5)});
    auto r = check_step_invariance(tree, S(), 10, 1);
    CHECK(r.verdict == Verdict::holds);
    CHECK(r.interaction_counts == std::set<std::size_t>{63});
    CHECK(r.runs == 13);

    CHECK(check_step_invariance(comb("<eps = eps>"), S(), 10, 1).interaction_counts == std::set<std::size_t>{1});

    auto dup = check_step_invariance(comb("<del(r1,r2) = gam(eps,eps)> interface r1, r2;"), S(), 50, 9);
    CHECK(dup.verdict == Verdict::holds);
    CHECK(dup.interaction_counts.size() == 1);
    auto g = build_reduction_graph(comb("<del(r1,r2) = gam(eps,eps)> interface r1, r2;"), S());
    CHECK(*maximal_path_lengths(g) == dup.interaction_counts);

    CHECK(check_step_invariance(comb("<del(eps,x) = gam(x,eps)>"), S(), 2, 1, 50).verdict == Verdict::inconclusive);
  }

  TEST_CASE("generator") {
    const auto& sig = S().signature();
    for (std::uint64_t seed = 0; seed < 10000; ++seed) {
      auto c = generate_random_configuration(S(), 12, seed % 3, seed);
      REQUIRE(validate_configuration(c, sig).ok());
      CHECK(c.agent_count() >= 1);
      CHECK(c.agent_count() <= 12);
      CHECK(c.interface.size() == seed % 3);
    }
    CHECK(generate_random_configuration(S(), 12, 1, 42) == generate_random_configuration(S(), 12, 1, 42));
  }

  TEST_CASE("audit is deterministic and thread independent") {
    auto a = audit_confluence(S(), 40, 8, 2000, 5, 1);
    auto b = audit_confluence(S(), 40, 8, 2000, 5, 3);
    CHECK(a.failed == 0);
    CHECK(a.passed == b.passed);
    CHECK(a.inconclusive == b.inconclusive);
    REQUIRE(a.samples.size() == b.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i) CHECK(a.samples[i].config == b.samples[i].config);
  }
}
