#pragma once

#include <string>

#include "inet/canonical.hpp"
#include "inet/core.hpp"

namespace inet {

/// Graphviz rendering of the net behind a configuration. Node ids follow the
/// canonical form, so alpha-equivalent inputs give byte-identical output.
/// Active pairs are drawn bold red. Throws CapExceeded above the cap.
std::string to_dot(const Configuration& c, const Signature& s, std::size_t canonical_cap = kDefaultCanonicalCap);

}  // namespace inet
