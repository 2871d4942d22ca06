#pragma once

// Terms, equations, configurations and interaction rules of the interaction
// calculus, together with their validation.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace inet {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AgentId {
  std::uint32_t value = 0;
  friend auto operator<=>(AgentId, AgentId) = default;
};

struct NameId {
  std::uint32_t value = 0;
  friend auto operator<=>(NameId, NameId) = default;
};

struct AgentType {
  std::string name;
  std::size_t arity = 0;
  friend bool operator==(const AgentType&, const AgentType&) = default;
};

class Signature {
 public:
  /// Throws Error if the name is already declared.
  AgentId add(std::string name, std::size_t arity);

  std::optional<AgentId> find(std::string_view name) const;
  bool contains(AgentId id) const { return id.value < agents_.size(); }
  const AgentType& operator[](AgentId id) const { return agents_.at(id.value); }
  std::size_t size() const { return agents_.size(); }
  bool empty() const { return agents_.empty(); }

  auto begin() const { return agents_.begin(); }
  auto end() const { return agents_.end(); }

  friend bool operator==(const Signature& a, const Signature& b) { return a.agents_ == b.agents_; }

 private:
  std::vector<AgentType> agents_;
  std::map<std::string, AgentId, std::less<>> index_;
};

/// t ::= alpha(t1, ..., tn) | x. Argument order is auxiliary-port order.
class Term {
 public:
  Term() = default;  // the name x0
  static Term name(NameId id);
  static Term agent(AgentId id, std::vector<Term> args = {});

  bool is_name() const noexcept { return is_name_; }
  bool is_agent() const noexcept { return !is_name_; }
  NameId name_id() const;
  AgentId agent_id() const;
  const std::vector<Term>& args() const noexcept { return args_; }

  std::size_t agent_count() const;
  bool contains(NameId id) const;
  /// Name leaves in preorder.
  void collect_names(std::vector<NameId>& out) const;
  /// Replaces the first occurrence of `x` (preorder) by `u`, in place.
  bool replace_name(NameId x, const Term& u);

  friend std::strong_ordering operator<=>(const Term& a, const Term& b);
  friend bool operator==(const Term& a, const Term& b);

 private:
  bool is_name_ = true;
  std::uint32_t id_ = 0;
  std::vector<Term> args_;
};

struct Equation {
  Term lhs;
  Term rhs;
  friend std::strong_ordering operator<=>(const Equation&, const Equation&) = default;
  friend bool operator==(const Equation&, const Equation&) = default;
};

using NameLabels = std::map<NameId, std::string>;

/// An unordered multiset of equations (stored in sequence order) plus an
/// ordered list of interface names. Labels hold surface names for printing;
/// only interface labels take part in comparison.
struct Configuration {
  std::vector<Equation> equations;
  std::vector<NameId> interface;
  NameLabels labels;

  bool is_interface(NameId id) const;
  std::optional<std::size_t> interface_position(NameId id) const;
  std::vector<std::string> interface_labels() const;
  std::size_t agent_count() const;
  /// One past the largest name id in use (equations and interface).
  std::uint32_t name_bound() const;

  friend std::strong_ordering operator<=>(const Configuration& a, const Configuration& b);
  friend bool operator==(const Configuration& a, const Configuration& b);
};

std::map<NameId, std::size_t> name_occurrences(const Configuration& c);

struct Violation {
  enum class Kind { unknown_agent, arity_mismatch, name_count, duplicate_interface };
  Kind kind;
  std::size_t equation = 0;  // first equation involved, or equations.size() for interface-only issues
  std::optional<AgentId> agent;
  std::optional<NameId> name;
  std::size_t count = 0;  // name_count: occurrences; arity_mismatch: arguments given
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

ValidationReport validate_configuration(const Configuration& c, const Signature& s);

/// Display name for a name id: its label, or x<id>.
std::string name_label(const NameLabels& labels, NameId id);

/// Rule alpha[alpha_side] >< beta[beta_side].
struct Rule {
  AgentId alpha;
  std::vector<Term> alpha_side;
  AgentId beta;
  std::vector<Term> beta_side;
  friend bool operator==(const Rule&, const Rule&) = default;
};

/// Unordered agent pair, stored with first <= second.
struct RuleKey {
  AgentId first;
  AgentId second;
  static RuleKey of(AgentId a, AgentId b) { return a <= b ? RuleKey{a, b} : RuleKey{b, a}; }
  friend auto operator<=>(const RuleKey&, const RuleKey&) = default;
};

struct RuleViolation {
  enum class Kind { unknown_agent, arity_mismatch, name_count, asymmetric_self_pair };
  Kind kind;
  std::optional<AgentId> agent;
  std::optional<NameId> name;
  std::size_t count = 0;
  std::string message;
};

std::vector<RuleViolation> check_rule(const Rule& r, const Signature& s);

/// For alpha == beta: swapping the two sides gives an alpha-equivalent rule.
bool is_self_symmetric(const Rule& r);

/// Equal up to renaming of rule names, allowing the two sides to be swapped.
bool rules_equivalent(const Rule& a, const Rule& b);

class RuleError : public Error {
 public:
  RuleError(std::string what, std::vector<RuleViolation> violations)
      : Error(std::move(what)), violations_(std::move(violations)) {}
  const std::vector<RuleViolation>& violations() const { return violations_; }

 private:
  std::vector<RuleViolation> violations_;
};

class InteractionSystem {
 public:
  InteractionSystem() = default;
  explicit InteractionSystem(Signature signature) : signature_(std::move(signature)) {}

  /// Validates and inserts; throws RuleError on an invalid rule or a second
  /// rule for an already covered pair.
  void add_rule(Rule r);

  struct Match {
    const Rule* rule;
    /// True when the left agent of the equation is the rule's beta.
    bool flipped;
  };
  std::optional<Match> lookup(AgentId lhs, AgentId rhs) const;

  const Signature& signature() const { return signature_; }
  const std::map<RuleKey, Rule>& rules() const { return rules_; }

 private:
  Signature signature_;
  std::map<RuleKey, Rule> rules_;
};

}  // namespace inet
