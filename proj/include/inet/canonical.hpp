#pragma once

// Canonical representatives of alpha-equivalence classes of configurations.
//
// A configuration is a port graph, so deciding alpha-equivalence is as hard
// as graph isomorphism. The canonical form is the lexicographically least
// encoding over all orderings and orientations of the equations, found by a
// backtracking search. Colour refinement over equation sides and automorphism
// pruning keep the search small at desk scale; a hard agent-count cap bounds
// the worst case.
//
// Canonical output: equations in the chosen order and orientation, interface
// name at list position i renamed to id i (its label kept), internal names
// renumbered from interface.size() upward in first-use order, internal labels
// dropped.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "inet/core.hpp"

namespace inet {

inline constexpr std::size_t kDefaultCanonicalCap = 64;

class CapExceeded : public Error {
 public:
  using Error::Error;
};

/// Throws CapExceeded when c has more than `max_agents` agent occurrences.
Configuration canonicalize(const Configuration& c, std::size_t max_agents = kDefaultCanonicalCap);

/// An integer code of c's alpha class: two configurations with the same
/// interface labels get equal keys iff they are alpha-equivalent. Cheaper
/// than canonicalize when only identity matters.
std::vector<std::int64_t> canonical_key(const Configuration& c, std::size_t max_agents = kDefaultCanonicalCap);

struct CanonicalForm {
  std::vector<std::int64_t> key;
  Configuration config;
};

/// canonical_key and canonicalize in one pass.
CanonicalForm canonical_form(const Configuration& c, std::size_t max_agents = kDefaultCanonicalCap);

bool alpha_equivalent(const Configuration& a, const Configuration& b, std::size_t max_agents = kDefaultCanonicalCap);

// Net-level identity. A deadlock x = t[x] is a vicious circle in the net and
// can be written with the cut at any agent of the circle; alpha-equivalence
// tells those apart, these functions do not. The cut is chosen by the least
// name-free shape, remaining ties by the least overall encoding. Without
// deadlocks they agree with the alpha versions.

CanonicalForm canonical_net_form(const Configuration& c, std::size_t max_agents = kDefaultCanonicalCap);
std::vector<std::int64_t> canonical_net_key(const Configuration& c, std::size_t max_agents = kDefaultCanonicalCap);
bool net_equivalent(const Configuration& a, const Configuration& b, std::size_t max_agents = kDefaultCanonicalCap);

}  // namespace inet
