#pragma once

#include <functional>
#include <span>
#include <utility>

#include "ilc/eval.hpp"
#include "ilc/plugin.hpp"
#include "ilc/term.hpp"
#include "ilc/type.hpp"
#include "ilc/value.hpp"

namespace ilc {

// Changes are ordinary values: an Int delta for Int, a CollectionChange
// (Replace / GroupChange) for collections, groups and changes themselves, a
// Pair of changes for pairs, and a curried binary function for functions.
// Changes are never compared with each other; only updated values are.

/// v ⊕ dv, dispatched on the shape of `v`. Throws ChangeTypeMismatch when
/// `dv` cannot be a change for `v`.
Value oplus(const Value& v, const Value& dv);
/// u ⊖ v: Int difference, Replace(u) for collections, componentwise for
/// pairs, the pointwise function difference for functions.
Value ominus(const Value& u, const Value& v);
/// 0_v without type information. Empty maps (payload type unknown) get
/// Replace(v).
Value nilChange(const Value& v);
/// 0_v at a known type: 0, or GroupChange(canonical group, zero) for
/// collections whose payload has a canonical group.
Value nilChange(const Plugin& plugin, const Type& t, const Value& v);

/// (f ⊕ df) v = f v ⊕ df v 0_v
Value functionOplus(const Value& f, const Value& df);
/// (g ⊖ f) v dv = g (v ⊕ dv) ⊖ f v
Value functionOminus(const Value& g, const Value& f);

/// Shape check: could `dv` be a change for `v`?
bool isChangeCompatible(const Value& v, const Value& dv);

/// (V, Δ, ⊕, ⊖) for one type, plus the nil change.
struct ChangeStructure {
  TypePtr baseType;
  std::function<Value(const Value&, const Value&)> oplus;
  std::function<Value(const Value&, const Value&)> ominus;
  std::function<Value(const Value&)> nil;
  std::function<bool(const Value&, const Value&)> member;
};

ChangeStructure changeStructureFor(const Plugin& plugin, TypePtr t);

/// (G, λg. G, ⊞, λg h. g ⊞ (⊟h)). Changes are GroupChange(g, d), except
/// for the additive Int group whose changes are plain integer deltas.
ChangeStructure groupToChangeStructure(GroupPtr g);

/// Sampled check of the function-change conditions: at every (a, da),
/// `df a da` is a change for `f a`, and
/// f a ⊕ df a da == f (a ⊕ da) ⊕ df (a ⊕ da) 0.
bool validateFunctionChange(const Value& f, const Value& df,
                            std::span<const std::pair<Value, Value>> samples);

/// dρ: changes for the variables of an environment, stored under "d"+x.
class ChangeEnvironment {
 public:
  ChangeEnvironment() = default;

  ChangeEnvironment extend(const std::string& baseName, Value change) const;
  /// Change for base variable `baseName`, or null.
  const Value* lookup(std::string_view baseName) const;
  std::size_t size() const noexcept { return env_.size(); }
  const Environment& asEnvironment() const noexcept { return env_; }

 private:
  explicit ChangeEnvironment(Environment env) : env_(std::move(env)) {}
  Environment env_;
};

/// Differential evaluation ⟦t⟧^Δ ρ dρ. Constants contribute their nil change
/// (which is their derivative), so this never consults Derive(c).
Value changeEval(const Plugin& plugin, const TermPtr& t, const Environment& env,
                 const ChangeEnvironment& denv);

}  // namespace ilc
