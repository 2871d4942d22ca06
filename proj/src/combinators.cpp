#include "inet/combinators.hpp"

namespace inet {

CombinatorNames combinator_names() { return {AgentId{0}, AgentId{1}, AgentId{2}}; }

std::vector<Rule> instantiate_erasing(const Signature& s, AgentId eps) {
  if (!s.contains(eps)) throw SchemaError("erasing agent is not in the signature");
  if (s[eps].arity != 0) throw SchemaError("erasing agent " + s[eps].name + " must have arity 0");
  std::vector<Rule> rules;
  for (std::uint32_t a = 0; a < s.size(); ++a) {
    const AgentId alpha{a};
    std::vector<Term> erasers(s[alpha].arity, Term::agent(eps));
    rules.push_back(Rule{eps, {}, alpha, std::move(erasers)});
  }
  return rules;
}

std::vector<Rule> instantiate_duplication(const Signature& s, AgentId del) {
  if (!s.contains(del)) throw SchemaError("duplicating agent is not in the signature");
  if (s[del].arity != 2) throw SchemaError("duplicating agent " + s[del].name + " must have arity 2");
  std::vector<Rule> rules;
  for (std::uint32_t a = 0; a < s.size(); ++a) {
    const AgentId alpha{a};
    if (alpha == del) continue;
    const std::size_t n = s[alpha].arity;
    std::vector<Term> xs, ys, dels;
    for (std::size_t k = 0; k < n; ++k) {
      NameId x{static_cast<std::uint32_t>(2 * k)};
      NameId y{static_cast<std::uint32_t>(2 * k + 1)};
      xs.push_back(Term::name(x));
      ys.push_back(Term::name(y));
      dels.push_back(Term::agent(del, {Term::name(x), Term::name(y)}));
    }
    rules.push_back(Rule{del, {Term::agent(alpha, std::move(xs)), Term::agent(alpha, std::move(ys))}, alpha,
                         std::move(dels)});
  }
  return rules;
}

InteractionSystem combinator_system() {
  Signature sig;
  const AgentId eps = sig.add("eps", 0);
  const AgentId del = sig.add("del", 2);
  const AgentId gam = sig.add("gam", 2);
  InteractionSystem sys(sig);

  const auto x = Term::name(NameId{0});
  const auto y = Term::name(NameId{1});
  sys.add_rule(Rule{gam, {x, y}, gam, {y, x}});
  sys.add_rule(Rule{del, {x, y}, del, {x, y}});
  for (auto& r : instantiate_erasing(sig, eps)) sys.add_rule(std::move(r));
  for (auto& r : instantiate_duplication(sig, del)) {
    if (r.beta == eps) continue;  // erasing already covers {eps, del}
    sys.add_rule(std::move(r));
  }
  return sys;
}

}  // namespace inet
