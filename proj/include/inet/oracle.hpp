#pragma once

// Brute-force exploration of the reduction relation on small configurations:
// the full graph of canonical states reachable by "one interaction, then
// eager indirection", and checks of the one-step diamond property, normal
// form uniqueness and strategy independence of the interaction count.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "inet/canonical.hpp"
#include "inet/core.hpp"
#include "inet/engine.hpp"

namespace inet {

enum class Verdict { holds, fails, inconclusive };

const char* to_string(Verdict v);

enum class NodeKind { reducible, normal, stuck_deadlock, stuck_norule };

struct GraphEdge {
  std::size_t from;
  StepInfo step;
  std::size_t to;
};

struct ReductionGraph {
  std::vector<Configuration> nodes;  // canonical
  std::vector<NodeKind> kinds;
  std::vector<GraphEdge> edges;
  std::vector<std::vector<std::size_t>> out;  // edge indices per node
  std::size_t root = 0;
  bool truncated = false;
};

inline constexpr std::size_t kDefaultNodeCap = 10000;

/// Breadth-first closure from the canonical, indirection-resolved start.
/// Hitting `max_nodes`, or a state too large to canonicalize, sets
/// `truncated` and stops expansion.
ReductionGraph build_reduction_graph(const Configuration& c, const InteractionSystem& s,
                                     std::size_t max_nodes = kDefaultNodeCap,
                                     std::size_t canonical_cap = kDefaultCanonicalCap);

/// Re-applies an edge's interaction to its source node.
Configuration replay_edge(const ReductionGraph& g, const GraphEdge& e, const InteractionSystem& s,
                          std::size_t canonical_cap = kDefaultCanonicalCap);

struct DiamondCounterexample {
  std::size_t node;
  std::size_t edge1;
  std::size_t edge2;
};

struct DiamondReport {
  Verdict verdict = Verdict::holds;
  std::optional<DiamondCounterexample> counterexample;
};

DiamondReport check_diamond(const ReductionGraph& g);

struct NormalFormReport {
  Verdict verdict = Verdict::holds;
  std::vector<std::size_t> normal_forms;
  std::vector<std::size_t> stuck;  // deadlocked or rule-less sinks, not part of the claim
};

NormalFormReport check_unique_normal_form(const ReductionGraph& g);

/// Interaction counts of all maximal paths from the root, or nullopt when
/// the graph is truncated or has a cycle.
std::optional<std::set<std::size_t>> maximal_path_lengths(const ReductionGraph& g);

/// Length of the shortest cycle through the root, in interaction edges.
std::optional<std::size_t> shortest_cycle_through_root(const ReductionGraph& g);

struct StepInvarianceReport {
  Verdict verdict = Verdict::holds;
  std::set<std::size_t> interaction_counts;
  bool finals_agree = true;
  std::size_t runs = 0;
};

/// Normalizes under fifo, lifo, by-index and `trials` random seeds derived
/// from `seed`. Inconclusive if any run runs out of fuel.
StepInvarianceReport check_step_invariance(const Configuration& c, const InteractionSystem& s, std::size_t trials,
                                           std::uint64_t seed, std::size_t fuel = 1'000'000);

/// Random valid configuration with at most `max_agents` agents (at least one
/// when max_agents > 0) and `interface_size` interface names r0, r1, ...
/// Fully determined by the seed.
Configuration generate_random_configuration(const InteractionSystem& s, std::size_t max_agents,
                                            std::size_t interface_size, std::uint64_t seed);

struct AuditSample {
  std::size_t index = 0;
  Configuration config;
  std::size_t nodes = 0;
  bool truncated = false;
  DiamondReport diamond;
  NormalFormReport normal_forms;
  std::vector<Configuration> witness;  // on failure: the fork and its two reducts, or the distinct normal forms

  bool failed() const { return diamond.verdict == Verdict::fails || normal_forms.verdict == Verdict::fails; }
  bool inconclusive() const { return !failed() && truncated; }
};

struct AuditReport {
  std::vector<AuditSample> samples;  // in sample order
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t inconclusive = 0;
};

/// Generates `samples` configurations (interface sizes cycling 0, 1, 2),
/// builds each reduction graph and checks the diamond and normal form
/// uniqueness. Work is spread over `threads` workers (0: hardware
/// concurrency); the result does not depend on the thread count.
AuditReport audit_confluence(const InteractionSystem& s, std::size_t samples, std::size_t max_agents,
                             std::size_t max_nodes, std::uint64_t seed, unsigned threads = 0);

}  // namespace inet
