#include <doctest.h>

#include "inet/canonical.hpp"
#include "inet/oracle.hpp"
#include "inet/parser.hpp"
#include "support.hpp"

using namespace inet;

namespace {

ParseResult<InteractionSystem> sys_of(const std::string& text) {
  return parse_system(SourceDocument::from_string(text));
}

ParseResult<Configuration> cfg_of(const std::string& text) {
  return parse_configuration(SourceDocument::from_string(text), testing::combinators().signature());
}

const char* kCombinators =
    "agents eps/0, del/2, gam/2; rule gam[x,y] >< gam[y,x]; rule del[x,y] >< del[x,y]; rule eps[] >< eps[]; "
    "rule del[gam(x1,x2),gam(y1,y2)] >< gam[del(x1,y1),del(x2,y2)]; rule eps[] >< gam[eps,eps]; "
    "rule eps[] >< del[eps,eps];";

}  // namespace

TEST_SUITE("parser") {
  TEST_CASE("the combinator system parses to the builtin one") {
    auto r = sys_of(kCombinators);
    REQUIRE(r.ok());
    const auto& builtin = testing::combinators();
    CHECK(r.value->signature() == builtin.signature());
    REQUIRE(r.value->rules().size() == 6);
    for (const auto& [key, rule] : builtin.rules()) {
      REQUIRE(r.value->rules().count(key));
      CHECK(rules_equivalent(r.value->rules().at(key), rule));
    }
  }

  TEST_CASE("smallest system") {
    auto r = sys_of("agents a/0; rule a[] >< a[];");
    REQUIRE(r.ok());
    CHECK(r.value->signature().size() == 1);
    CHECK(r.value->rules().size() == 1);
  }

  TEST_CASE("non-linear rule is rejected with a position") {
    auto r = sys_of("agents a/1;\nrule a[x] >< a[y];");
    CHECK_FALSE(r.ok());
    REQUIRE(r.errors.size() >= 1);
    CHECK(r.errors[0].line == 2);
    std::string all;
    for (const auto& e : r.errors) all += e.message + "\n";
    CHECK(all.find("x") != std::string::npos);
    CHECK(all.find("y") != std::string::npos);
  }

  TEST_CASE("configurations") {
    auto loop = cfg_of("<del(eps,x) = gam(x,eps)>");
    REQUIRE(loop.ok());
    CHECK(loop.value->equations.size() == 1);
    CHECK(loop.value->agent_count() == 4);

    auto empty = cfg_of("<>");
    REQUIRE(empty.ok());
    CHECK(empty.value->equations.empty());

    auto iface = cfg_of("<r = gam(eps,eps)> interface r;");
    REQUIRE(iface.ok());
    CHECK(iface.value->equations.size() == 1);
    CHECK(iface.value->interface_labels() == std::vector<std::string>{"r"});
  }

  TEST_CASE("unicode aliases") {
    auto a = cfg_of("⟨δ(ε,x) = γ(x,ε)⟩");
    REQUIRE(a.ok());
    CHECK(alpha_equivalent(*a.value, *cfg_of("<del(eps,x) = gam(x,eps)>").value));
    auto s = sys_of("agents a/0; rule a[] ⋈ a[];");
    CHECK(s.ok());
    auto t = sys_of("agents a/0; rule a[] ⊠ a[];");
    CHECK(t.ok());
  }

  TEST_CASE("comments are skipped") {
    auto r = cfg_of("# a net\n<eps = eps> # trailing\n");
    CHECK(r.ok());
  }

  TEST_CASE("syntax errors carry line, column and expectations") {
    auto r = cfg_of("<eps = eps,\n  gam(x, = y>");
    REQUIRE_FALSE(r.ok());
    REQUIRE(!r.errors.empty());
    CHECK(r.errors[0].line == 2);
    CHECK(r.errors[0].column == 10);
    CHECK(!r.errors[0].expected.empty());
    auto doc = SourceDocument::from_string("<eps = eps,\n  gam(x, = y>", "f.icfg");
    CHECK(format_error(doc, r.errors[0]).rfind("f.icfg:2:10: error:", 0) == 0);
  }

  TEST_CASE("validation errors are positioned") {
    auto r = cfg_of("<eps = eps,\n x = gam(x, x)>");
    REQUIRE_FALSE(r.ok());
    CHECK(r.errors[0].line == 2);
    auto a = cfg_of("<gam(x) = x>");
    REQUIRE_FALSE(a.ok());
    CHECK(a.errors[0].column == 2);
    auto d = sys_of("agents a/0; rule a[] >< a[]; rule a[] >< a[];");
    REQUIRE_FALSE(d.ok());
    CHECK(d.errors[0].column == 30);
  }

  TEST_CASE("rendering") {
    CHECK(render(Configuration{}, testing::combinators().signature()) == "<>");
    auto c = testing::comb("<r = gam(eps,eps)> interface r;");
    auto text = render(c, testing::combinators().signature());
    auto back = cfg_of(text);
    REQUIRE(back.ok());
    CHECK(alpha_equivalent(*back.value, c));
    auto p = testing::comb("<del(eps,x) = gam(x,eps)>");
    CHECK(alpha_equivalent(*cfg_of(render(p, testing::combinators().signature())).value, p));
  }

  TEST_CASE("random configurations round trip") {
    const auto& sys = testing::combinators();
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
      auto c = generate_random_configuration(sys, 12, seed % 3, seed);
      auto back = cfg_of(render(c, sys.signature()));
      REQUIRE(back.ok());
      CHECK(alpha_equivalent(*back.value, c));
    }
  }

  TEST_CASE("system round trip") {
    auto text = render(testing::combinators());
    auto back = sys_of(text);
    REQUIRE(back.ok());
    CHECK(back.value->signature() == testing::combinators().signature());
    for (const auto& [key, rule] : testing::combinators().rules()) CHECK(rules_equivalent(back.value->rules().at(key), rule));
  }

  TEST_CASE("document with system and configuration") {
    auto r = parse_document(SourceDocument::from_string("agents a/0; rule a[] >< a[]; <a = a>"));
    REQUIRE(r.ok());
    CHECK(r.value->system.has_value());
    CHECK(r.value->config.has_value());
  }

  TEST_CASE("missing file") { CHECK_THROWS_AS(SourceDocument::from_file("/nonexistent/x.inet"), IoError); }
}
