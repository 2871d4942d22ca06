#pragma once

// Reduction of configurations by interaction and indirection.
//
// Indirections are administrative: after every interaction they are applied
// to fixpoint in ascending equation order, so one "step" is one interaction
// followed by an eager indirection phase.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "inet/canonical.hpp"
#include "inet/core.hpp"

namespace inet {

/// Monotone supply of names disjoint from everything already in use.
class NameSupply {
 public:
  explicit NameSupply(std::uint32_t next = 0) : next_(next) {}
  static NameSupply after(const Configuration& c) { return NameSupply(c.name_bound()); }
  NameId fresh() { return NameId{next_++}; }
  std::uint32_t peek() const { return next_; }

 private:
  std::uint32_t next_;
};

class NotARedex : public Error {
 public:
  using Error::Error;
};

class NoRule : public Error {
 public:
  using Error::Error;
};

enum class Side { lhs, rhs };

struct InteractionRedex {
  std::size_t equation;
  RuleKey key;
  bool flipped;
};

struct IndirectionRedex {
  std::size_t equation;
  Side name_side;
  std::size_t target;  // equation holding the other occurrence of the name
};

/// Every equation lands in exactly one list.
struct RedexReport {
  std::vector<InteractionRedex> interactions;
  std::vector<IndirectionRedex> indirections;
  std::vector<std::size_t> deadlocks;
  std::vector<std::size_t> answers;
  std::vector<std::size_t> norule;
};

RedexReport find_redexes(const Configuration& c, const InteractionSystem& s);

enum class StepKind { interaction, indirection };

struct StepInfo {
  StepKind kind = StepKind::interaction;
  std::optional<RuleKey> rule;
  std::size_t equation = 0;
  bool flipped = false;  // interaction: lhs agent is the rule's beta; indirection: the name is on the rhs
  std::size_t target = 0;  // indirection only
  std::size_t fresh_names = 0;
};

struct Stepped {
  Configuration config;
  StepInfo info;
};

/// Replaces equation i by the rule's equations, spliced in at position i.
Stepped apply_interaction(const Configuration& c, std::size_t i, const InteractionSystem& s, NameSupply& fresh);

Stepped apply_indirection(const Configuration& c, std::size_t i);

Configuration resolve_indirections(const Configuration& c);

struct Strategy {
  enum class Kind { fifo, lifo, by_index, random };
  Kind kind = Kind::by_index;
  std::uint64_t seed = 0;

  static Strategy fifo() { return {Kind::fifo, 0}; }
  static Strategy lifo() { return {Kind::lifo, 0}; }
  static Strategy by_index() { return {Kind::by_index, 0}; }
  static Strategy random(std::uint64_t seed) { return {Kind::random, seed}; }
};

enum class Status { normal, fuel_exhausted, stuck_deadlock, stuck_norule };

const char* to_string(Status s);
const char* to_string(Strategy::Kind k);

struct StepNormal {};
struct StepStuck {
  Status status;
  RedexReport report;
};
using StepResult = std::variant<Stepped, StepNormal, StepStuck>;

/// One interaction chosen by `strategy` plus eager indirection. Expects an
/// indirection-resolved configuration. Without run history, fifo and lifo
/// fall back to the lowest and highest redex index.
StepResult step(const Configuration& c, const InteractionSystem& s, const Strategy& strategy, NameSupply& fresh);

struct TraceEntry {
  StepInfo info;
  Configuration after;
};

struct NormalizeResult {
  Configuration final;
  Status status = Status::normal;
  std::size_t interactions = 0;
  std::size_t indirections = 0;
  std::size_t max_width = 0;
  RedexReport report;  // redexes of `final`
  std::optional<std::vector<TraceEntry>> trace;
};

NormalizeResult normalize(const Configuration& c, const InteractionSystem& s, const Strategy& strategy,
                          std::size_t fuel, bool want_trace = false);

class StateCapExceeded : public Error {
 public:
  using Error::Error;
};

struct CycleReport {
  bool found = false;
  std::size_t period = 0;  // interactions between the two visits
  std::size_t entry = 0;   // interactions before the first visit of the repeated state
};

/// Reduces with `strategy` until a state repeats (compared with
/// canonical_net_key after every eager-indirection phase) or reduction stops. Throws
/// StateCapExceeded once more than `max_states` distinct states were seen.
CycleReport detect_cycle(const Configuration& c, const InteractionSystem& s, const Strategy& strategy,
                         std::size_t max_states, std::size_t canonical_cap = kDefaultCanonicalCap);

}  // namespace inet
