#include <doctest.h>

#include <json.hpp>
#include <sstream>

#include "inet/dot.hpp"
#include "inet/oracle.hpp"
#include "inet/report.hpp"
#include "support.hpp"

using namespace inet;
using testing::comb;

namespace {

std::size_t count(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
  return n;
}

}  // namespace

TEST_SUITE("output") {
  TEST_CASE("dot of the example net") {
    const auto& sig = testing::combinators().signature();
    auto dot = to_dot(comb("<del(eps,x) = gam(x,eps)>"), sig);
    CHECK(dot.rfind("graph net {", 0) == 0);
    CHECK(count(dot, "[label=\"del/2\"]") == 1);
    CHECK(count(dot, "[label=\"gam/2\"]") == 1);
    CHECK(count(dot, "[label=\"eps/0\"]") == 2);
    CHECK(count(dot, " -- ") == 4);
    CHECK(count(dot, "color=red") == 1);
  }

  TEST_CASE("dot of the empty configuration") {
    auto dot = to_dot(Configuration{}, testing::combinators().signature());
    CHECK(count(dot, " -- ") == 0);
    CHECK(count(dot, "label=") == 0);
  }

  TEST_CASE("dot is independent of naming") {
    const auto& sig = testing::combinators().signature();
    CHECK(to_dot(comb("<del(eps,a) = gam(a,eps)>"), sig) == to_dot(comb("<gam(q,eps) = del(eps,q)>"), sig));
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      auto c = generate_random_configuration(testing::combinators(), 10, seed % 3, seed);
      CHECK(to_dot(c, sig) == to_dot(testing::alpha_variant(c, seed), sig));
    }
  }

  TEST_CASE("step lines") {
    const auto& sig = testing::combinators().signature();
    auto n = combinator_names();
    StepInfo i;
    i.kind = StepKind::interaction;
    i.rule = RuleKey::of(n.gam, n.del);
    i.equation = 2;
    CHECK(format_step(1, i, sig) == "STEP 1 INTERACTION {del,gam} eq=2");
    StepInfo d;
    d.kind = StepKind::indirection;
    d.equation = 0;
    CHECK(format_step(7, d, sig) == "STEP 7 INDIRECTION eq=0");
  }

  TEST_CASE("text and structured reports") {
    const auto& sys = testing::combinators();
    auto r = normalize(comb("<eps = gam(eps,eps)>"), sys, Strategy::by_index(), 100, true);
    auto text = format_text(r, sys.signature());
    CHECK(text.find("status: normal") != std::string::npos);
    CHECK(text.find("interactions: 3") != std::string::npos);
    CHECK(text.find("final: <>") != std::string::npos);
    CHECK(count(text, "STEP ") == r.trace->size());

    std::istringstream lines(format_structured(r, sys.signature()));
    std::string line;
    std::size_t steps = 0;
    nlohmann::json last;
    while (std::getline(lines, line)) {
      last = nlohmann::json::parse(line);
      steps += last["type"] == "step";
    }
    CHECK(steps == r.trace->size());
    CHECK(last["type"] == "summary");
    CHECK(last["status"] == "normal");
    CHECK(last["interactions"] == 3);
    CHECK(last["final"] == "<>");
  }
}
