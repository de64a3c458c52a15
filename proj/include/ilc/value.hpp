#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "ilc/type.hpp"

namespace ilc {

class Value;
struct BagData;
struct MapData;
struct PairData;
struct GroupDescriptor;
struct CollectionChange;
struct Closure;
struct NativeFn;
struct Thunk;

using GroupPtr = std::shared_ptr<const GroupDescriptor>;

/// Bag elements and map keys: an Int or a Pair of Ints. Hashable and totally
/// ordered, so collections can be stored unordered and printed sorted.
struct Key {
  std::int64_t first = 0;
  std::int64_t second = 0;
  bool isPair = false;

  static Key ofInt(std::int64_t v) { return Key{v, 0, false}; }
  static Key ofPair(std::int64_t a, std::int64_t b) { return Key{a, b, true}; }

  friend bool operator==(const Key&, const Key&) = default;
  friend auto operator<=>(const Key& a, const Key& b) {
    if (a.isPair != b.isPair) return a.isPair <=> b.isPair;
    if (a.first != b.first) return a.first <=> b.first;
    return a.second <=> b.second;
  }
};

struct KeyHash {
  std::size_t operator()(const Key& k) const noexcept {
    std::uint64_t h = static_cast<std::uint64_t>(k.first) * 0x9E3779B97F4A7C15ULL;
    h ^= static_cast<std::uint64_t>(k.second) + 0x632BE59BD9B4E019ULL + (h << 6) +
         (h >> 2);
    return static_cast<std::size_t>(h ^ (k.isPair ? 0x5bd1e995ULL : 0));
  }
};

using BagCounts = std::unordered_map<Key, std::int64_t, KeyHash>;

/// Runtime values. Payloads are immutable once shared; a collection held by
/// exactly one Value may be updated in place by group folds (see
/// `mutableBag` / `mutableMap`).
class Value {
 public:
  enum class Kind { Int, Bag, Map, Pair, Group, Change, Closure, Native, Thunk };

  Value() : rep_(std::int64_t{0}) {}
  Value(std::int64_t v) : rep_(v) {}  // NOLINT: integers are values

  /// Drops zero multiplicities.
  static Value bag(BagCounts counts);
  /// Drops entries whose payload is a group zero (0, empty bag, empty map).
  static Value map(std::unordered_map<Key, Value, KeyHash> entries);
  static Value pair(Value first, Value second);
  static Value group(GroupPtr g);
  static Value replace(Value replacement);
  static Value groupChange(GroupPtr g, Value delta);
  static Value closure(std::shared_ptr<const Closure> c);
  static Value native(std::shared_ptr<const NativeFn> n);
  static Value thunk(std::shared_ptr<Thunk> t);

  Kind kind() const noexcept { return static_cast<Kind>(rep_.index()); }
  bool isInt() const noexcept { return kind() == Kind::Int; }
  bool isBag() const noexcept { return kind() == Kind::Bag; }
  bool isMap() const noexcept { return kind() == Kind::Map; }
  bool isPair() const noexcept { return kind() == Kind::Pair; }
  bool isGroup() const noexcept { return kind() == Kind::Group; }
  bool isChange() const noexcept { return kind() == Kind::Change; }
  bool isThunk() const noexcept { return kind() == Kind::Thunk; }
  bool isFunction() const noexcept {
    return kind() == Kind::Closure || kind() == Kind::Native;
  }

  std::int64_t asInt() const;
  const BagCounts& bag() const;
  const std::unordered_map<Key, Value, KeyHash>& map() const;
  const Value& first() const;
  const Value& second() const;
  const GroupPtr& group() const;
  const CollectionChange& change() const;
  const Closure& closure() const;
  const NativeFn& native() const;
  const std::shared_ptr<Thunk>& thunk() const;

  /// Non-null only when this Value is the sole owner of its payload.
  BagCounts* mutableBag();
  std::unordered_map<Key, Value, KeyHash>* mutableMap();

 private:
  using Rep = std::variant<std::int64_t, std::shared_ptr<BagData>,
                           std::shared_ptr<MapData>, std::shared_ptr<const PairData>,
                           GroupPtr, std::shared_ptr<const CollectionChange>,
                           std::shared_ptr<const Closure>,
                           std::shared_ptr<const NativeFn>, std::shared_ptr<Thunk>>;
  explicit Value(Rep rep) : rep_(std::move(rep)) {}

  Rep rep_;
};

using MapEntries = std::unordered_map<Key, Value, KeyHash>;

struct BagData {
  BagCounts counts;
};
struct MapData {
  MapEntries entries;
};
struct PairData {
  Value first;
  Value second;
};

/// An abelian group (G, merge, inverse, zero). Groups compare by name, which
/// lets derivative code check "same group" without comparing functions.
struct GroupDescriptor {
  std::string name;
  TypePtr carrier;
  std::function<Value(const Value&, const Value&)> merge;
  std::function<Value(const Value&)> inverse;
  Value zero;
  /// m-fold merge of a value with itself (negative m uses the inverse).
  std::function<Value(const Value&, std::int64_t)> power;
  /// acc := merge(acc, v), mutating acc's payload when it is uniquely owned.
  std::function<void(Value&, const Value&)> mergeInto;
};

/// Erased change for collection-like base types: either a wholesale
/// replacement or a delta to be merged with the named group.
struct CollectionChange {
  enum class Kind { Replace, GroupChange };
  Kind kind;
  Value payload;
  GroupPtr group;  // null for Replace
};

/// Host primitive, curried: arguments accumulate until `arity` is reached.
/// Bit i of `lazyMask` keeps argument i unforced when the primitive runs.
struct NativeFn {
  std::string name;
  int arity = 1;
  std::uint32_t lazyMask = 0;
  std::function<Value(std::span<const Value>)> fn;
  std::vector<Value> args;
};

Value makeNative(std::string name, int arity,
                 std::function<Value(std::span<const Value>)> fn,
                 std::uint32_t lazyMask = 0);

Key toKey(const Value& v);
Value fromKey(const Key& k);

/// True for 0, the empty bag and the empty map: the zeros of every group the
/// collections plugin registers.
bool isZeroPayload(const Value& v);

/// Structural equality on canonical first-order values (Int, Bag, Map, Pair,
/// Group by name, collection changes). Throws TypeMismatch on functions.
bool valueEquals(const Value& a, const Value& b);

/// Literal syntax, deterministic (collections printed in key order).
std::string showValue(const Value& v);

}  // namespace ilc
