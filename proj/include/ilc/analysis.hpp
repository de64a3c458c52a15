#pragma once

#include <unordered_map>

#include "ilc/plugin.hpp"
#include "ilc/term.hpp"

namespace ilc {

/// isClosed for every subterm, keyed by node. Closed subterms of a program
/// always receive nil changes in its derivative.
using ClosednessMap = std::unordered_map<const Term*, bool>;

ClosednessMap markClosed(const TermPtr& t);

/// Rewrites applications of derivative constants `c'` whose nil-position
/// base arguments are closed into the plugin's specialized derivative.
/// Everything else is left as is.
TermPtr specialize(const TermPtr& t, const SpecializationTable& table);

/// For λx₁ dx₁ … xₙ dxₙ. body (other parameters are fixed arguments such
/// as groups): true iff no paired base parameter xᵢ is free in body.
bool isSelfMaintainable(const Term& d);

}  // namespace ilc
