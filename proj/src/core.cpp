#include "inet/core.hpp"

#include <algorithm>

namespace inet {

AgentId Signature::add(std::string name, std::size_t arity) {
  if (index_.contains(name)) throw Error("agent '" + name + "' declared twice");
  AgentId id{static_cast<std::uint32_t>(agents_.size())};
  index_.emplace(name, id);
  agents_.push_back(AgentType{std::move(name), arity});
  return id;
}

std::optional<AgentId> Signature::find(std::string_view name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Term Term::name(NameId id) {
  Term t;
  t.is_name_ = true;
  t.id_ = id.value;
  return t;
}

Term Term::agent(AgentId id, std::vector<Term> args) {
  Term t;
  t.is_name_ = false;
  t.id_ = id.value;
  t.args_ = std::move(args);
  return t;
}

NameId Term::name_id() const {
  if (!is_name_) throw Error("term is not a name");
  return NameId{id_};
}

AgentId Term::agent_id() const {
  if (is_name_) throw Error("term is not an agent");
  return AgentId{id_};
}

std::size_t Term::agent_count() const {
  if (is_name_) return 0;
  std::size_t n = 1;
  for (const auto& a : args_) n += a.agent_count();
  return n;
}

bool Term::contains(NameId id) const {
  if (is_name_) return id_ == id.value;
  return std::any_of(args_.begin(), args_.end(), [&](const Term& a) { return a.contains(id); });
}

void Term::collect_names(std::vector<NameId>& out) const {
  if (is_name_) {
    out.push_back(NameId{id_});
    return;
  }
  for (const auto& a : args_) a.collect_names(out);
}

bool Term::replace_name(NameId x, const Term& u) {
  if (is_name_) {
    if (id_ != x.value) return false;
    *this = u;
    return true;
  }
  for (auto& a : args_)
    if (a.replace_name(x, u)) return true;
  return false;
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  // names sort before agents
  if (a.is_name_ != b.is_name_) return a.is_name_ ? std::strong_ordering::less : std::strong_ordering::greater;
  if (auto c = a.id_ <=> b.id_; c != 0) return c;
  return std::lexicographical_compare_three_way(a.args_.begin(), a.args_.end(), b.args_.begin(), b.args_.end());
}

bool operator==(const Term& a, const Term& b) {
  return a.is_name_ == b.is_name_ && a.id_ == b.id_ && a.args_ == b.args_;
}

bool Configuration::is_interface(NameId id) const {
  return std::find(interface.begin(), interface.end(), id) != interface.end();
}

std::optional<std::size_t> Configuration::interface_position(NameId id) const {
  auto it = std::find(interface.begin(), interface.end(), id);
  if (it == interface.end()) return std::nullopt;
  return static_cast<std::size_t>(it - interface.begin());
}

std::vector<std::string> Configuration::interface_labels() const {
  std::vector<std::string> out;
  out.reserve(interface.size());
  for (auto id : interface) {
    auto it = labels.find(id);
    out.push_back(it == labels.end() ? std::string{} : it->second);
  }
  return out;
}

std::size_t Configuration::agent_count() const {
  std::size_t n = 0;
  for (const auto& eq : equations) n += eq.lhs.agent_count() + eq.rhs.agent_count();
  return n;
}

std::uint32_t Configuration::name_bound() const {
  std::uint32_t bound = 0;
  std::vector<NameId> names;
  for (const auto& eq : equations) {
    eq.lhs.collect_names(names);
    eq.rhs.collect_names(names);
  }
  names.insert(names.end(), interface.begin(), interface.end());
  for (auto n : names) bound = std::max(bound, n.value + 1);
  return bound;
}

std::strong_ordering operator<=>(const Configuration& a, const Configuration& b) {
  if (auto c = a.equations <=> b.equations; c != 0) return c;
  if (auto c = a.interface <=> b.interface; c != 0) return c;
  return a.interface_labels() <=> b.interface_labels();
}

bool operator==(const Configuration& a, const Configuration& b) {
  return a.equations == b.equations && a.interface == b.interface && a.interface_labels() == b.interface_labels();
}

std::map<NameId, std::size_t> name_occurrences(const Configuration& c) {
  std::map<NameId, std::size_t> counts;
  std::vector<NameId> names;
  for (const auto& eq : c.equations) {
    eq.lhs.collect_names(names);
    eq.rhs.collect_names(names);
  }
  for (auto n : names) ++counts[n];
  for (auto n : c.interface) ++counts[n];
  return counts;
}

std::string name_label(const NameLabels& labels, NameId id) {
  auto it = labels.find(id);
  if (it != labels.end() && !it->second.empty()) return it->second;
  return "x" + std::to_string(id.value);
}

namespace {

// Appends arity violations for every agent node in t.
template <class Report>
void check_arities(const Term& t, const Signature& s, Report&& report) {
  if (t.is_name()) return;
  const AgentId id = t.agent_id();
  if (!s.contains(id)) {
    report(id, true, t.args().size());
  } else if (s[id].arity != t.args().size()) {
    report(id, false, t.args().size());
  }
  for (const auto& a : t.args()) check_arities(a, s, report);
}

std::string agent_label(const Signature& s, AgentId id) {
  return s.contains(id) ? s[id].name : "#" + std::to_string(id.value);
}

}  // namespace

ValidationReport validate_configuration(const Configuration& c, const Signature& s) {
  ValidationReport report;
  std::map<NameId, std::size_t> first_equation;

  for (std::size_t i = 0; i < c.equations.size(); ++i) {
    for (const Term* side : {&c.equations[i].lhs, &c.equations[i].rhs}) {
      check_arities(*side, s, [&](AgentId id, bool unknown, std::size_t given) {
        Violation v{unknown ? Violation::Kind::unknown_agent : Violation::Kind::arity_mismatch, i, id, {}, given, {}};
        if (unknown) {
          v.message = "unknown agent " + agent_label(s, id);
        } else {
          v.message = s[id].name + " applied to " + std::to_string(given) + " argument" + (given == 1 ? "" : "s") +
                      ", arity " + std::to_string(s[id].arity);
        }
        report.violations.push_back(std::move(v));
      });
      std::vector<NameId> names;
      side->collect_names(names);
      for (auto n : names) first_equation.try_emplace(n, i);
    }
  }

  std::map<NameId, std::size_t> listed;
  for (auto n : c.interface) {
    if (++listed[n] > 1) {
      report.violations.push_back(Violation{Violation::Kind::duplicate_interface, c.equations.size(), {}, n, 2,
                                            "interface name " + name_label(c.labels, n) + " listed twice"});
    }
  }

  for (const auto& [name, count] : name_occurrences(c)) {
    // repeated interface entries are reported once, as duplicates
    auto extra = listed.contains(name) ? listed[name] - 1 : 0;
    if (count - extra == 2) continue;
    auto eq = first_equation.find(name);
    report.violations.push_back(Violation{Violation::Kind::name_count,
                                          eq == first_equation.end() ? c.equations.size() : eq->second,
                                          {},
                                          name,
                                          count,
                                          name_label(c.labels, name) + " occurs " + std::to_string(count) +
                                              (count == 1 ? " time" : " times")});
  }
  return report;
}

namespace {

// Builds a renaming from the names of `from` onto those of `to` by parallel
// traversal; fails on any structural mismatch or a non-bijective mapping.
class Renaming {
 public:
  bool match(const Term& from, const Term& to) {
    if (from.is_name() != to.is_name()) return false;
    if (from.is_name()) return bind(from.name_id(), to.name_id());
    if (from.agent_id() != to.agent_id() || from.args().size() != to.args().size()) return false;
    for (std::size_t i = 0; i < from.args().size(); ++i)
      if (!match(from.args()[i], to.args()[i])) return false;
    return true;
  }

  bool match(const std::vector<Term>& from, const std::vector<Term>& to) {
    if (from.size() != to.size()) return false;
    for (std::size_t i = 0; i < from.size(); ++i)
      if (!match(from[i], to[i])) return false;
    return true;
  }

 private:
  bool bind(NameId a, NameId b) {
    auto [fwd, fresh_fwd] = forward_.emplace(a, b);
    auto [bwd, fresh_bwd] = backward_.emplace(b, a);
    return fwd->second == b && bwd->second == a;
  }

  std::map<NameId, NameId> forward_;
  std::map<NameId, NameId> backward_;
};

bool same_up_to_renaming(const Rule& a, const Rule& b) {
  if (a.alpha != b.alpha || a.beta != b.beta) return false;
  Renaming r;
  return r.match(a.alpha_side, b.alpha_side) && r.match(a.beta_side, b.beta_side);
}

Rule swapped(const Rule& r) { return Rule{r.beta, r.beta_side, r.alpha, r.alpha_side}; }

}  // namespace

bool is_self_symmetric(const Rule& r) { return r.alpha == r.beta && same_up_to_renaming(r, swapped(r)); }

bool rules_equivalent(const Rule& a, const Rule& b) {
  return same_up_to_renaming(a, b) || same_up_to_renaming(a, swapped(b));
}

std::vector<RuleViolation> check_rule(const Rule& r, const Signature& s) {
  std::vector<RuleViolation> out;
  for (auto [head, side] : {std::pair{r.alpha, &r.alpha_side}, std::pair{r.beta, &r.beta_side}}) {
    if (!s.contains(head)) {
      out.push_back({RuleViolation::Kind::unknown_agent, head, {}, 0, "unknown agent " + agent_label(s, head)});
    } else if (s[head].arity != side->size()) {
      out.push_back({RuleViolation::Kind::arity_mismatch, head, {}, side->size(),
                     "rule side for " + s[head].name + " has " + std::to_string(side->size()) + " terms, arity " +
                         std::to_string(s[head].arity)});
    }
    for (const auto& t : *side) {
      check_arities(t, s, [&](AgentId id, bool unknown, std::size_t given) {
        if (unknown) {
          out.push_back({RuleViolation::Kind::unknown_agent, id, {}, given, "unknown agent " + agent_label(s, id)});
        } else {
          out.push_back({RuleViolation::Kind::arity_mismatch, id, {}, given,
                         s[id].name + " applied to " + std::to_string(given) + " argument" + (given == 1 ? "" : "s") +
                             ", arity " + std::to_string(s[id].arity)});
        }
      });
    }
  }

  std::map<NameId, std::size_t> counts;
  std::vector<NameId> names;
  for (const auto& t : r.alpha_side) t.collect_names(names);
  for (const auto& t : r.beta_side) t.collect_names(names);
  for (auto n : names) ++counts[n];
  for (const auto& [name, count] : counts) {
    if (count != 2) {
      out.push_back({RuleViolation::Kind::name_count, {}, name, count,
                     "x" + std::to_string(name.value) + " occurs " + std::to_string(count) +
                         (count == 1 ? " time" : " times") + " in the rule"});
    }
  }

  if (r.alpha == r.beta && out.empty() && !is_self_symmetric(r)) {
    out.push_back({RuleViolation::Kind::asymmetric_self_pair, r.alpha, {}, 0,
                   "self-pair rule is not symmetric under swapping its sides"});
  }
  return out;
}

void InteractionSystem::add_rule(Rule r) {
  auto violations = check_rule(r, signature_);
  if (!violations.empty()) throw RuleError("invalid rule: " + violations.front().message, std::move(violations));
  const auto key = RuleKey::of(r.alpha, r.beta);
  if (rules_.contains(key)) {
    throw RuleError("duplicate rule for pair {" + signature_[key.first].name + "," + signature_[key.second].name + "}",
                    {});
  }
  rules_.emplace(key, std::move(r));
}

std::optional<InteractionSystem::Match> InteractionSystem::lookup(AgentId lhs, AgentId rhs) const {
  auto it = rules_.find(RuleKey::of(lhs, rhs));
  if (it == rules_.end()) return std::nullopt;
  return Match{&it->second, it->second.alpha != lhs};
}

}  // namespace inet
