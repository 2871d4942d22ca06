#pragma once

// Interaction combinators and the erasing/duplication rule schemas.

#include <vector>

#include "inet/core.hpp"

namespace inet {

struct CombinatorNames {
  AgentId eps;  // arity 0
  AgentId del;  // arity 2
  AgentId gam;  // arity 2
};

/// Signature {eps/0, del/2, gam/2}, declared in that order.
CombinatorNames combinator_names();

/// Two annihilations (gam gam, del del), erasing against every agent, and
/// duplication of gam by del. The eps/del pair takes the erasing rule.
InteractionSystem combinator_system();

class SchemaError : public Error {
 public:
  using Error::Error;
};

/// eps >< alpha[eps, ..., eps] for every alpha in s, eps itself included.
std::vector<Rule> instantiate_erasing(const Signature& s, AgentId eps);

/// del[alpha(x1..xn), alpha(y1..yn)] >< alpha[del(x1,y1), ..., del(xn,yn)]
/// for every alpha in s other than del.
std::vector<Rule> instantiate_duplication(const Signature& s, AgentId del);

}  // namespace inet
