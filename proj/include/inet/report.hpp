#pragma once

// Text and JSON-lines renderings of reduction results.

#include <string>

#include "inet/engine.hpp"

namespace inet {

/// "STEP k INTERACTION {del,gam} eq=i" or "STEP k INDIRECTION eq=i".
std::string format_step(std::size_t k, const StepInfo& info, const Signature& s);

/// Step log (when traced) followed by the summary block.
std::string format_text(const NormalizeResult& r, const Signature& s);

/// One JSON object per line: a "step" object per trace entry, then a
/// "summary" object with status, interactions, indirections and maxWidth.
std::string format_structured(const NormalizeResult& r, const Signature& s);

}  // namespace inet
