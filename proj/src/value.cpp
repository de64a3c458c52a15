#include "ilc/value.hpp"

#include <algorithm>
#include <sstream>

#include "ilc/error.hpp"

namespace ilc {

namespace {

[[noreturn]] void wrongKind(const char* wanted, const Value& v) {
  throw Error(ErrorKind::ChangeTypeMismatch,
              std::string("expected ") + wanted + ", got " + showValue(v));
}

template <class T, class Rep>
const T& payload(const Rep& rep, const char* wanted, const Value& self) {
  if (auto* p = std::get_if<T>(&rep)) return *p;
  wrongKind(wanted, self);
}

}  // namespace

Value Value::bag(BagCounts counts) {
  std::erase_if(counts, [](const auto& kv) { return kv.second == 0; });
  return Value(Rep(std::make_shared<BagData>(BagData{std::move(counts)})));
}

Value Value::map(MapEntries entries) {
  std::erase_if(entries, [](const auto& kv) { return isZeroPayload(kv.second); });
  return Value(Rep(std::make_shared<MapData>(MapData{std::move(entries)})));
}

Value Value::pair(Value first, Value second) {
  return Value(Rep(std::make_shared<const PairData>(
      PairData{std::move(first), std::move(second)})));
}

Value Value::group(GroupPtr g) { return Value(Rep(std::move(g))); }

Value Value::replace(Value replacement) {
  return Value(Rep(std::make_shared<const CollectionChange>(CollectionChange{
      CollectionChange::Kind::Replace, std::move(replacement), nullptr})));
}

Value Value::groupChange(GroupPtr g, Value delta) {
  return Value(Rep(std::make_shared<const CollectionChange>(CollectionChange{
      CollectionChange::Kind::GroupChange, std::move(delta), std::move(g)})));
}

Value Value::closure(std::shared_ptr<const Closure> c) { return Value(Rep(std::move(c))); }
Value Value::native(std::shared_ptr<const NativeFn> n) { return Value(Rep(std::move(n))); }
Value Value::thunk(std::shared_ptr<Thunk> t) { return Value(Rep(std::move(t))); }

std::int64_t Value::asInt() const {
  return payload<std::int64_t>(rep_, "Int", *this);
}
const BagCounts& Value::bag() const {
  return payload<std::shared_ptr<BagData>>(rep_, "Bag", *this)->counts;
}
const MapEntries& Value::map() const {
  return payload<std::shared_ptr<MapData>>(rep_, "Map", *this)->entries;
}
const Value& Value::first() const {
  return payload<std::shared_ptr<const PairData>>(rep_, "Pair", *this)->first;
}
const Value& Value::second() const {
  return payload<std::shared_ptr<const PairData>>(rep_, "Pair", *this)->second;
}
const GroupPtr& Value::group() const { return payload<GroupPtr>(rep_, "Group", *this); }
const CollectionChange& Value::change() const {
  return *payload<std::shared_ptr<const CollectionChange>>(rep_, "change", *this);
}
const Closure& Value::closure() const {
  return *payload<std::shared_ptr<const Closure>>(rep_, "closure", *this);
}
const NativeFn& Value::native() const {
  return *payload<std::shared_ptr<const NativeFn>>(rep_, "primitive", *this);
}
const std::shared_ptr<Thunk>& Value::thunk() const {
  return payload<std::shared_ptr<Thunk>>(rep_, "thunk", *this);
}

BagCounts* Value::mutableBag() {
  auto* p = std::get_if<std::shared_ptr<BagData>>(&rep_);
  if (!p || p->use_count() != 1) return nullptr;
  return &(*p)->counts;
}

MapEntries* Value::mutableMap() {
  auto* p = std::get_if<std::shared_ptr<MapData>>(&rep_);
  if (!p || p->use_count() != 1) return nullptr;
  return &(*p)->entries;
}

Value makeNative(std::string name, int arity,
                 std::function<Value(std::span<const Value>)> fn,
                 std::uint32_t lazyMask) {
  auto n = std::make_shared<NativeFn>();
  n->name = std::move(name);
  n->arity = arity;
  n->lazyMask = lazyMask;
  n->fn = std::move(fn);
  return Value::native(std::move(n));
}

Key toKey(const Value& v) {
  if (v.isInt()) return Key::ofInt(v.asInt());
  if (v.isPair() && v.first().isInt() && v.second().isInt())
    return Key::ofPair(v.first().asInt(), v.second().asInt());
  throw Error(ErrorKind::TypeMismatch,
              "collection elements must be Int or Pair Int Int, got " + showValue(v));
}

Value fromKey(const Key& k) {
  if (!k.isPair) return Value(k.first);
  return Value::pair(Value(k.first), Value(k.second));
}

bool isZeroPayload(const Value& v) {
  switch (v.kind()) {
    case Value::Kind::Int: return v.asInt() == 0;
    case Value::Kind::Bag: return v.bag().empty();
    case Value::Kind::Map: return v.map().empty();
    default: return false;
  }
}

bool valueEquals(const Value& a, const Value& b) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Value::Kind::Int:
      return a.asInt() == b.asInt();
    case Value::Kind::Bag:
      return a.bag() == b.bag();
    case Value::Kind::Map: {
      const auto& ma = a.map();
      const auto& mb = b.map();
      if (ma.size() != mb.size()) return false;
      for (const auto& [k, v] : ma) {
        auto it = mb.find(k);
        if (it == mb.end() || !valueEquals(v, it->second)) return false;
      }
      return true;
    }
    case Value::Kind::Pair:
      return valueEquals(a.first(), b.first()) && valueEquals(a.second(), b.second());
    case Value::Kind::Group:
      return a.group()->name == b.group()->name;
    case Value::Kind::Change: {
      const auto& ca = a.change();
      const auto& cb = b.change();
      if (ca.kind != cb.kind) return false;
      if (ca.group && cb.group && ca.group->name != cb.group->name) return false;
      return valueEquals(ca.payload, cb.payload);
    }
    case Value::Kind::Closure:
    case Value::Kind::Native:
    case Value::Kind::Thunk:
      break;
  }
  throw Error(ErrorKind::TypeMismatch,
              "equality is only defined on first-order values");
}

namespace {

void showKey(std::ostream& os, const Key& k) {
  if (k.isPair)
    os << "(pair " << k.first << ' ' << k.second << ')';
  else
    os << k.first;
}

void show(std::ostream& os, const Value& v) {
  switch (v.kind()) {
    case Value::Kind::Int:
      os << v.asInt();
      return;
    case Value::Kind::Bag: {
      std::vector<std::pair<Key, std::int64_t>> items(v.bag().begin(), v.bag().end());
      std::sort(items.begin(), items.end(),
                [](const auto& x, const auto& y) { return x.first < y.first; });
      os << "(bag";
      for (const auto& [k, m] : items) {
        os << ' ';
        if (m == 1) {
          showKey(os, k);
        } else {
          os << "(* ";
          showKey(os, k);
          os << ' ' << m << ')';
        }
      }
      os << ')';
      return;
    }
    case Value::Kind::Map: {
      std::vector<const MapEntries::value_type*> items;
      for (const auto& e : v.map()) items.push_back(&e);
      std::sort(items.begin(), items.end(),
                [](auto* x, auto* y) { return x->first < y->first; });
      os << "(map";
      for (const auto* e : items) {
        os << " (";
        showKey(os, e->first);
        os << ' ';
        show(os, e->second);
        os << ')';
      }
      os << ')';
      return;
    }
    case Value::Kind::Pair:
      os << "(pair ";
      show(os, v.first());
      os << ' ';
      show(os, v.second());
      os << ')';
      return;
    case Value::Kind::Group:
      os << v.group()->name;
      return;
    case Value::Kind::Change: {
      const auto& c = v.change();
      if (c.kind == CollectionChange::Kind::Replace) {
        os << "(replace ";
      } else {
        os << "(groupchange " << c.group->name << ' ';
      }
      show(os, c.payload);
      os << ')';
      return;
    }
    case Value::Kind::Closure:
      os << "<function>";
      return;
    case Value::Kind::Native:
      os << "<primitive " << v.native().name << '>';
      return;
    case Value::Kind::Thunk:
      os << "<deferred>";
      return;
  }
}

}  // namespace

std::string showValue(const Value& v) {
  std::ostringstream os;
  show(os, v);
  return os.str();
}

}  // namespace ilc
