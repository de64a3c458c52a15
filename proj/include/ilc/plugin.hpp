#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ilc/term.hpp"
#include "ilc/type.hpp"
#include "ilc/value.hpp"

namespace ilc {

/// A specialized derivative for one primitive under a nil-change pattern.
///
/// `build(typeArgs)` yields a term that takes, in order, the base values of
/// the nil positions and then behaves like the primitive's derivative after
/// its first `pairs` (base, change) argument pairs have been supplied.
struct Specialization {
  std::size_t pairs = 0;
  std::function<TermPtr(std::span<const TypePtr>)> build;
};

/// Keyed by (primitive name, bitmask of base-argument positions whose change
/// is statically known to be nil).
class SpecializationTable {
 public:
  void add(std::string primitive, std::uint32_t nilMask, Specialization s);
  /// Entries for `primitive`, most specific (largest mask) first.
  std::vector<std::pair<std::uint32_t, const Specialization*>> lookup(
      std::string_view primitive) const;
  bool empty() const noexcept { return entries_.empty(); }

 private:
  std::map<std::pair<std::string, std::uint32_t>, Specialization, std::less<>> entries_;
};

/// A differentiation plugin: base types, primitives, their erased change
/// structures and their derivatives.
class Plugin {
 public:
  virtual ~Plugin() = default;

  /// True for every primitive name, including integer literals.
  virtual bool hasConstant(std::string_view name) const = 0;
  /// Throws UnknownConstant, or TypeMismatch on bad type arguments.
  virtual TypePtr constantType(std::string_view name,
                               std::span<const TypePtr> typeArgs) const = 0;
  virtual Value constantValue(std::string_view name,
                              std::span<const TypePtr> typeArgs) const = 0;

  /// Throws UnknownBaseType for unregistered or malformed base types.
  virtual void checkBaseType(const Type& base) const = 0;
  virtual TypePtr baseChangeType(const Type& base) const = 0;
  /// Erased update / difference at a base type, as closed terms of types
  /// ι -> Δι -> ι and ι -> ι -> Δι.
  virtual TermPtr baseOplusTerm(const Type& base) const = 0;
  virtual TermPtr baseOminusTerm(const Type& base) const = 0;
  /// Typed nil change and change-set membership at a base type.
  virtual Value baseNil(const Type& base, const Value& v) const = 0;
  virtual bool baseMember(const Type& base, const Value& v, const Value& dv) const = 0;

  /// Derive(c), when the plugin supplies an efficient one.
  virtual std::optional<TermPtr> derivativeTerm(
      std::string_view name, std::span<const TypePtr> typeArgs) const = 0;

  virtual const SpecializationTable& specializations() const = 0;

  /// Group descriptors referenceable by name in change literals.
  virtual GroupPtr groupByName(std::string_view name) const = 0;
};

/// Suffix marking the derivative constant `c'` that derive emits for a
/// primitive `c` with a derivative-table entry.
inline constexpr char kDerivativeSuffix = '\'';

/// `c` for `c'`, nullopt otherwise.
std::optional<std::string_view> derivativeBase(std::string_view name);

/// Constant lookup covering both primitives and derivative constants `c'`,
/// whose type is Δ(type of c) and whose value is Derive(c).
bool isConstantName(const Plugin& plugin, std::string_view name);
TypePtr resolveConstantType(const Plugin& plugin, std::string_view name,
                            std::span<const TypePtr> typeArgs);
Value resolveConstantValue(const Plugin& plugin, std::string_view name,
                           std::span<const TypePtr> typeArgs);

/// Fails with UnknownBaseType unless every base type inside `t` is registered.
void checkType(const Plugin& plugin, const Type& t);

}  // namespace ilc
