#pragma once

#include "ilc/plugin.hpp"
#include "ilc/term.hpp"
#include "ilc/type.hpp"
#include "ilc/typecheck.hpp"

namespace ilc {

struct DeriveConfig {
  const Plugin* plugin = nullptr;
  /// When false every constant gets the slow `c ⊖ c` derivative.
  bool useDerivativeTable = true;
};

/// Δι from the plugin; Δ(σ → τ) = σ → Δσ → Δτ.
TypePtr changeType(const Plugin& plugin, const Type& t);

/// x : τ ↦ dx : Δτ. Throws NameClash for names starting with 'd'.
TypingContext changeContext(const Plugin& plugin, const TypingContext& ctx);

/// Renames bound variables starting with 'd' to fresh `x_<n>` names.
TermPtr renameAvoidingD(const TermPtr& t);

/// Derive(t). Base arguments of derivative applications are marked deferred.
/// Constants with a plugin derivative become the primed constant `c'`.
TermPtr derive(const TermPtr& t, const DeriveConfig& config);

/// Closed terms of type τ → Δτ → τ and τ → τ → Δτ.
TermPtr erasedOplusTerm(const Plugin& plugin, const Type& t);
TermPtr erasedOminusTerm(const Plugin& plugin, const Type& t);

/// ⊖τ c c
TermPtr fallbackConstantDerivative(const Plugin& plugin, const TermPtr& c, const Type& t);

}  // namespace ilc
