#pragma once

#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>

#include "ilc/plugin.hpp"
#include "ilc/value.hpp"

namespace ilc::collections {

// Groups. Bag elements and map keys are untyped Keys at runtime, so one bag
// group serves every element type and map groups are indexed by their
// payload group only.
GroupPtr intAddGroup();
GroupPtr bagGroup();
GroupPtr mapGroup(GroupPtr payload);
/// intAdd, bagGroup, mapGroup(<name>) nested to any depth; null otherwise.
GroupPtr groupNamed(std::string_view name);

/// Canonical group of a type: intAdd for Int, bagGroup for bags, the map
/// group of the payload's canonical group for maps. Null for anything else.
GroupPtr canonicalGroup(const Type& t);
/// Same, read off a value. Null for empty maps and non-group payloads.
GroupPtr canonicalGroupOf(const Value& v);

// Bags
Value emptyBag();
Value singletonBag(const Value& element);
Value bagUnion(const Value& a, const Value& b);
Value bagNegate(const Value& a);

// Maps
Value emptyMap();
Value singletonMap(const Value& key, const Value& payload);

/// Combines f(x), m times (inverted for negative m), over every entry x↦m.
Value foldBag(const GroupDescriptor& g, const Value& f, const Value& bag);
/// Merges f k v over every entry with `merge`, starting at `zero`.
Value foldMapGen(const Value& zero, const Value& merge, const Value& f, const Value& map);
/// foldMapGen with gB's zero and merge. Caller promises f k is a
/// homomorphism from gA to gB.
Value foldMap(const GroupDescriptor& gA, const GroupDescriptor& gB, const Value& f,
              const Value& map);

/// The collections plugin: Int, Bag σ, Map κ τ, Pair σ τ, Group τ and
/// Delta τ, with their primitives and derivatives.
class CollectionsPlugin final : public Plugin {
 public:
  CollectionsPlugin();

  bool hasConstant(std::string_view name) const override;
  TypePtr constantType(std::string_view name,
                       std::span<const TypePtr> typeArgs) const override;
  Value constantValue(std::string_view name,
                      std::span<const TypePtr> typeArgs) const override;

  void checkBaseType(const Type& base) const override;
  TypePtr baseChangeType(const Type& base) const override;
  TermPtr baseOplusTerm(const Type& base) const override;
  TermPtr baseOminusTerm(const Type& base) const override;
  Value baseNil(const Type& base, const Value& v) const override;
  bool baseMember(const Type& base, const Value& v, const Value& dv) const override;

  std::optional<TermPtr> derivativeTerm(std::string_view name,
                                        std::span<const TypePtr> typeArgs) const override;

  const SpecializationTable& specializations() const override { return specs_; }
  GroupPtr groupByName(std::string_view name) const override { return groupNamed(name); }

 private:
  TermPtr parseCached(const std::string& text) const;

  SpecializationTable specs_;
  mutable std::mutex mutex_;
  mutable std::unordered_map<std::string, TermPtr> parsed_;
};

const CollectionsPlugin& plugin();

}  // namespace ilc::collections
