#include <doctest.h>

#include <set>

#include "inet/combinators.hpp"
#include "port_graph.hpp"
#include "support.hpp"

using namespace inet;

TEST_SUITE("combinators") {
  TEST_CASE("six rules cover all pairs") {
    const auto& sys = testing::combinators();
    CHECK(sys.rules().size() == 6);
    for (std::uint32_t a = 0; a < 3; ++a)
      for (std::uint32_t b = 0; b < 3; ++b) CHECK(sys.lookup(AgentId{a}, AgentId{b}).has_value());
    for (const auto& [key, rule] : sys.rules()) {
      CHECK(check_rule(rule, sys.signature()).empty());
      if (key.first == key.second) CHECK(is_self_symmetric(rule));
    }
  }

  TEST_CASE("table entries instantiate the schemas") {
    const auto& sys = testing::combinators();
    auto n = combinator_names();
    auto dup = instantiate_duplication(sys.signature(), n.del);
    bool found = false;
    for (const auto& r : dup) {
      if (RuleKey::of(r.alpha, r.beta) == RuleKey::of(n.del, n.gam)) {
        CHECK(rules_equivalent(r, sys.rules().at(RuleKey::of(n.del, n.gam))));
        found = true;
      }
    }
    CHECK(found);
    for (const auto& r : instantiate_erasing(sys.signature(), n.eps)) {
      auto key = RuleKey::of(r.alpha, r.beta);
      CHECK(rules_equivalent(r, sys.rules().at(key)));
    }
  }

  TEST_CASE("erasing schema") {
    Signature s;
    auto eps = s.add("eps", 0);
    auto gam = s.add("gam", 2);
    auto rules = instantiate_erasing(s, eps);
    REQUIRE(rules.size() == 2);
    std::set<RuleKey> keys;
    for (const auto& r : rules) keys.insert(RuleKey::of(r.alpha, r.beta));
    CHECK(keys.count(RuleKey::of(eps, eps)));
    CHECK(keys.count(RuleKey::of(eps, gam)));

    Signature only;
    auto e = only.add("eps", 0);
    CHECK(instantiate_erasing(only, e).size() == 1);

    Signature three;
    auto e3 = three.add("eps", 0);
    auto a = three.add("a", 3);
    auto r3 = instantiate_erasing(three, e3);
    REQUIRE(r3.size() == 2);
    for (const auto& r : r3) {
      if (r.alpha == a || r.beta == a) {
        const auto& side = r.alpha == a ? r.alpha_side : r.beta_side;
        const auto& other = r.alpha == a ? r.beta_side : r.alpha_side;
        CHECK(other.empty());
        REQUIRE(side.size() == 3);
        for (const auto& t : side) CHECK(t == Term::agent(e3));
      }
    }
  }

  TEST_CASE("duplication schema") {
    Signature s;
    auto del = s.add("del", 2);
    auto a = s.add("a", 1);
    auto eps = s.add("eps", 0);
    auto rules = instantiate_duplication(s, del);
    REQUIRE(rules.size() == 2);
    for (const auto& r : rules) {
      CHECK(check_rule(r, s).empty());
      CHECK(r.alpha == del);
      if (r.beta == a) {
        REQUIRE(r.alpha_side.size() == 2);
        CHECK(r.alpha_side[0].agent_id() == a);
        REQUIRE(r.beta_side.size() == 1);
        CHECK(r.beta_side[0].agent_id() == del);
      } else {
        CHECK(r.beta == eps);
        CHECK(r.alpha_side == std::vector<Term>{Term::agent(eps), Term::agent(eps)});
        CHECK(r.beta_side.empty());
      }
    }
  }

  TEST_CASE("schemas reject a wrong distinguished agent") {
    Signature s;
    s.add("eps", 0);
    auto g = s.add("gam", 2);
    CHECK_THROWS_AS(instantiate_erasing(s, g), SchemaError);
    CHECK_THROWS_AS(instantiate_duplication(s, AgentId{0}), SchemaError);
  }

  TEST_CASE("port graph oracle") {
    for (std::size_t d = 1; d <= 5; ++d) {
      testing::PortGraph g;
      auto root = g.add(testing::PortGraph::Kind::era);
      g.link({root, 0}, {g.build_tree(testing::gamma_tree(d)), 0});
      CHECK(g.reduce() == (std::size_t{2} << d) - 1);
      CHECK(g.live_nodes() == 0);
    }
    auto tree = testing::gamma_trees(3)[2];
    testing::PortGraph g;
    auto dup = g.add(testing::PortGraph::Kind::dup);
    auto r1 = g.add(testing::PortGraph::Kind::free), r2 = g.add(testing::PortGraph::Kind::free);
    g.link({dup, 1}, {r1, 0});
    g.link({dup, 2}, {r2, 0});
    g.link({dup, 0}, {g.build_tree(tree), 0});
    g.reduce();
    CHECK(g.read_back(r1) == tree);
    CHECK(g.read_back(r2) == tree);
  }

  TEST_CASE("tree enumeration counts") {
    std::size_t catalan[] = {1, 1, 2, 5, 14, 42, 132, 429};
    for (std::size_t n = 0; n < 8; ++n) CHECK(testing::gamma_trees(n).size() == catalan[n]);
  }
}
