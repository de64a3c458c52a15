#include "ilc/collections.hpp"

#include <charconv>
#include <map>

#include "ilc/change.hpp"
#include "ilc/derive.hpp"
#include "ilc/error.hpp"
#include "ilc/eval.hpp"
#include "ilc/syntax.hpp"

namespace ilc::collections {

namespace {

void addInto(BagCounts& counts, const BagCounts& add, std::int64_t scale = 1) {
  for (const auto& [k, m] : add) {
    auto [it, inserted] = counts.try_emplace(k, m * scale);
    if (!inserted) {
      it->second += m * scale;
      if (it->second == 0) counts.erase(it);
    }
  }
}

GroupPtr makeIntAdd() {
  auto g = std::make_shared<GroupDescriptor>();
  g->name = "intAdd";
  g->carrier = types::intT();
  g->merge = [](const Value& a, const Value& b) { return Value(a.asInt() + b.asInt()); };
  g->inverse = [](const Value& a) { return Value(-a.asInt()); };
  g->zero = Value(std::int64_t{0});
  g->power = [](const Value& v, std::int64_t m) { return Value(v.asInt() * m); };
  g->mergeInto = [](Value& acc, const Value& v) { acc = Value(acc.asInt() + v.asInt()); };
  return g;
}

Value scaleBag(const Value& v, std::int64_t m) {
  if (m == 0) return emptyBag();
  BagCounts out;
  out.reserve(v.bag().size());
  for (const auto& [k, c] : v.bag()) out.emplace(k, c * m);
  return Value::bag(std::move(out));
}

GroupPtr makeBagGroup() {
  auto g = std::make_shared<GroupDescriptor>();
  g->name = "bagGroup";
  g->carrier = types::bag(types::intT());
  g->merge = bagUnion;
  g->inverse = bagNegate;
  g->zero = Value::bag({});
  g->power = scaleBag;
  g->mergeInto = [](Value& acc, const Value& v) {
    if (v.bag().empty()) return;
    if (acc.bag().empty()) {
      acc = v;
    } else if (BagCounts* c = acc.mutableBag()) {
      addInto(*c, v.bag());
    } else {
      acc = bagUnion(acc, v);
    }
  };
  return g;
}

void mergeEntries(MapEntries& into, const MapEntries& delta, const GroupDescriptor& g) {
  for (const auto& [k, dv] : delta) {
    auto it = into.find(k);
    if (it == into.end()) {
      if (!isZeroPayload(dv)) into.emplace(k, dv);
      continue;
    }
    g.mergeInto(it->second, dv);
    if (isZeroPayload(it->second)) into.erase(it);
  }
}

GroupPtr makeMapGroup(GroupPtr inner) {
  auto g = std::make_shared<GroupDescriptor>();
  g->name = "mapGroup(" + inner->name + ")";
  g->carrier = types::map(types::intT(), inner->carrier);
  auto merge = [inner](const Value& a, const Value& b) {
    if (a.map().empty()) return b;
    if (b.map().empty()) return a;
    const Value& big = a.map().size() >= b.map().size() ? a : b;
    const Value& small = &big == &a ? b : a;
    Value out = Value::map(big.map());
    mergeEntries(*out.mutableMap(), small.map(), *inner);
    return out;
  };
  g->merge = merge;
  g->inverse = [inner](const Value& a) {
    MapEntries out;
    out.reserve(a.map().size());
    for (const auto& [k, v] : a.map()) out.emplace(k, inner->inverse(v));
    return Value::map(std::move(out));
  };
  g->zero = Value::map({});
  g->power = [inner](const Value& a, std::int64_t m) {
    MapEntries out;
    if (m != 0)
      for (const auto& [k, v] : a.map()) out.emplace(k, inner->power(v, m));
    return Value::map(std::move(out));
  };
  g->mergeInto = [inner, merge](Value& acc, const Value& v) {
    if (v.map().empty()) return;
    if (acc.map().empty()) {
      acc = v;
    } else if (MapEntries* e = acc.mutableMap()) {
      mergeEntries(*e, v.map(), *inner);
    } else {
      acc = merge(acc, v);
    }
  };
  return g;
}

bool isKeyType(const Type& t) {
  if (t.isBase("Int")) return t.args().empty();
  return t.isBase("Pair") && t.args().size() == 2 && t.args()[0]->isBase("Int") &&
         t.args()[1]->isBase("Int");
}

/// GroupChange(g, d), or the raw delta for intAdd.
Value wrapDelta(const GroupPtr& g, Value d) {
  if (g->name == "intAdd") return d;
  return Value::groupChange(g, std::move(d));
}

/// The delta of `dv` in group g, if dv is such a change.
std::optional<Value> deltaIn(const GroupPtr& g, const Value& dv) {
  if (g->name == "intAdd") {
    if (dv.isInt()) return dv;
    return std::nullopt;
  }
  if (dv.isChange() && dv.change().kind == CollectionChange::Kind::GroupChange &&
      dv.change().group->name == g->name)
    return dv.change().payload;
  return std::nullopt;
}

[[noreturn]] void groupMismatch(const std::string& expected, const Value& dv) {
  throw Error(ErrorKind::GroupMismatch,
              "expected a change in " + expected + ", got " + showValue(dv));
}

// ---- primitive table ----

using TypeArgs = std::span<const TypePtr>;

struct Prim {
  std::size_t typeArity;
  std::function<TypePtr(TypeArgs)> type;
  std::function<Value(TypeArgs)> value;
};

TypePtr intT() { return types::intT(); }

TypePtr dT(const TypePtr& t) { return changeType(plugin(), *t); }

Value native(std::string name, int arity, std::function<Value(std::span<const Value>)> fn,
             std::uint32_t lazy = 0) {
  return makeNative(std::move(name), arity, std::move(fn), lazy);
}

Value intBinary(std::string name, std::int64_t (*op)(std::int64_t, std::int64_t)) {
  return native(std::move(name), 2,
                [op](std::span<const Value> a) { return Value(op(a[0].asInt(), a[1].asInt())); });
}

Value foldBagDerivative(const Value& g, const Value& f, const Value& db) {
  const CollectionChange& c = db.change();
  if (c.kind == CollectionChange::Kind::Replace)
    return Value::replace(foldBag(*g.group(), f, c.payload));
  if (c.group->name != "bagGroup") groupMismatch("bagGroup", db);
  return wrapDelta(g.group(), foldBag(*g.group(), f, c.payload));
}

Value foldMapDerivative(const Value& gA, const Value& gB, const Value& f, const Value& dm) {
  const CollectionChange& c = dm.change();
  if (c.kind == CollectionChange::Kind::Replace)
    return Value::replace(foldMap(*gA.group(), *gB.group(), f, c.payload));
  std::string expected = "mapGroup(" + gA.group()->name + ")";
  if (c.group->name != expected) groupMismatch(expected, dm);
  return wrapDelta(gB.group(), foldMap(*gA.group(), *gB.group(), f, c.payload));
}

const std::map<std::string, Prim, std::less<>>& prims() {
  using namespace types;
  static const std::map<std::string, Prim, std::less<>> table = [] {
    std::map<std::string, Prim, std::less<>> t;
    auto i2 = [](TypeArgs) { return fn({intT(), intT(), intT()}); };
    t["plus"] = {0, i2, [](TypeArgs) {
                   return intBinary("plus", [](std::int64_t a, std::int64_t b) { return a + b; });
                 }};
    t["minus"] = {0, i2, [](TypeArgs) {
                    return intBinary("minus", [](std::int64_t a, std::int64_t b) { return a - b; });
                  }};
    t["mul"] = {0, i2, [](TypeArgs) {
                  return intBinary("mul", [](std::int64_t a, std::int64_t b) { return a * b; });
                }};
    t["oplusInt"] = {0, i2, [](TypeArgs) {
                       return intBinary("oplusInt",
                                        [](std::int64_t a, std::int64_t b) { return a + b; });
                     }};
    t["ominusInt"] = {0, i2, [](TypeArgs) {
                        return intBinary("ominusInt",
                                         [](std::int64_t a, std::int64_t b) { return a - b; });
                      }};
    t["negInt"] = {0, [](TypeArgs) { return fn(intT(), intT()); },
                   [](TypeArgs) {
                     return native("negInt", 1,
                                   [](std::span<const Value> a) { return Value(-a[0].asInt()); });
                   }};
    t["intAdd"] = {0, [](TypeArgs) { return group(intT()); },
                   [](TypeArgs) { return Value::group(intAddGroup()); }};

    // Bags
    t["emptyBag"] = {1, [](TypeArgs a) { return bag(a[0]); },
                     [](TypeArgs) { return emptyBag(); }};
    t["singletonBag"] = {1, [](TypeArgs a) { return fn(a[0], bag(a[0])); },
                         [](TypeArgs) {
                           return native("singletonBag", 1, [](std::span<const Value> a) {
                             return singletonBag(a[0]);
                           });
                         }};
    t["union"] = {1, [](TypeArgs a) { return fn({bag(a[0]), bag(a[0]), bag(a[0])}); },
                  [](TypeArgs) {
                    return native("union", 2, [](std::span<const Value> a) {
                      return bagUnion(a[0], a[1]);
                    });
                  }};
    t["negate"] = {1, [](TypeArgs a) { return fn(bag(a[0]), bag(a[0])); },
                   [](TypeArgs) {
                     return native("negate", 1,
                                   [](std::span<const Value> a) { return bagNegate(a[0]); });
                   }};
    t["bagGroup"] = {1, [](TypeArgs a) { return group(bag(a[0])); },
                     [](TypeArgs) { return Value::group(bagGroup()); }};
    t["foldBag"] = {2,
                    [](TypeArgs a) { return fn({group(a[1]), fn(a[0], a[1]), bag(a[0]), a[1]}); },
                    [](TypeArgs) {
                      return native("foldBag", 3, [](std::span<const Value> a) {
                        return foldBag(*a[0].group(), a[1], a[2]);
                      });
                    }};

    // Maps
    t["emptyMap"] = {2, [](TypeArgs a) { return map(a[0], a[1]); },
                     [](TypeArgs) { return emptyMap(); }};
    t["singletonMap"] = {2, [](TypeArgs a) { return fn({a[0], a[1], map(a[0], a[1])}); },
                         [](TypeArgs) {
                           return native("singletonMap", 2, [](std::span<const Value> a) {
                             return singletonMap(a[0], a[1]);
                           });
                         }};
    t["mapGroup"] = {2, [](TypeArgs a) { return fn(group(a[1]), group(map(a[0], a[1]))); },
                     [](TypeArgs) {
                       return native("mapGroup", 1, [](std::span<const Value> a) {
                         return Value::group(mapGroup(a[0].group()));
                       });
                     }};
    t["foldMap"] = {3,
                    [](TypeArgs a) {
                      return fn({group(a[1]), group(a[2]), fn({a[0], a[1], a[2]}),
                                 map(a[0], a[1]), a[2]});
                    },
                    [](TypeArgs) {
                      return native("foldMap", 4, [](std::span<const Value> a) {
                        return foldMap(*a[0].group(), *a[1].group(), a[2], a[3]);
                      });
                    }};
    t["foldMapGen"] = {3,
                       [](TypeArgs a) {
                         return fn({a[2], fn({a[2], a[2], a[2]}), fn({a[0], a[1], a[2]}),
                                    map(a[0], a[1]), a[2]});
                       },
                       [](TypeArgs) {
                         return native("foldMapGen", 4, [](std::span<const Value> a) {
                           return foldMapGen(a[0], a[1], a[2], a[3]);
                         });
                       }};

    // Pairs
    t["pair"] = {2, [](TypeArgs a) { return fn({a[0], a[1], pair(a[0], a[1])}); },
                 [](TypeArgs) {
                   return native("pair", 2, [](std::span<const Value> a) {
                     return Value::pair(a[0], a[1]);
                   });
                 }};
    t["fst"] = {2, [](TypeArgs a) { return fn(pair(a[0], a[1]), a[0]); },
                [](TypeArgs) {
                  return native("fst", 1, [](std::span<const Value> a) { return a[0].first(); });
                }};
    t["snd"] = {2, [](TypeArgs a) { return fn(pair(a[0], a[1]), a[1]); },
                [](TypeArgs) {
                  return native("snd", 1, [](std::span<const Value> a) { return a[0].second(); });
                }};

    // Erased change structure on collection-like bases
    t["replace"] = {1, [](TypeArgs a) { return fn(a[0], delta(a[0])); },
                    [](TypeArgs) {
                      return native("replace", 1,
                                    [](std::span<const Value> a) { return Value::replace(a[0]); });
                    }};
    t["groupChange"] = {1, [](TypeArgs a) { return fn({group(a[0]), a[0], delta(a[0])}); },
                        [](TypeArgs) {
                          return native("groupChange", 2, [](std::span<const Value> a) {
                            return Value::groupChange(a[0].group(), a[1]);
                          });
                        }};
    t["oplus"] = {1, [](TypeArgs a) { return fn({a[0], delta(a[0]), a[0]}); },
                  [](TypeArgs) {
                    return native("oplus", 2,
                                  [](std::span<const Value> a) { return oplus(a[0], a[1]); });
                  }};
    t["ominus"] = {1, [](TypeArgs a) { return fn({a[0], a[0], delta(a[0])}); },
                   [](TypeArgs) {
                     return native("ominus", 2,
                                   [](std::span<const Value> a) { return ominus(a[0], a[1]); });
                   }};

    // Derivatives of primitives
    t["unionD"] = {1,
                   [](TypeArgs a) {
                     TypePtr b = bag(a[0]);
                     return fn({b, delta(b), b, delta(b), delta(b)});
                   },
                   [](TypeArgs) {
                     return native(
                         "unionD", 4,
                         [](std::span<const Value> a) {
                           const Value& dx = a[1];
                           const Value& dy = a[3];
                           auto dxd = deltaIn(bagGroup(), dx);
                           auto dyd = deltaIn(bagGroup(), dy);
                           if (dxd && dyd)
                             return Value::groupChange(bagGroup(), bagUnion(*dxd, *dyd));
                           return Value::replace(bagUnion(oplus(a[0], dx), oplus(a[2], dy)));
                         },
                         0b0101);
                   }};
    t["negateD"] = {1,
                    [](TypeArgs a) {
                      TypePtr b = bag(a[0]);
                      return fn({b, delta(b), delta(b)});
                    },
                    [](TypeArgs) {
                      return native(
                          "negateD", 2,
                          [](std::span<const Value> a) {
                            if (auto d = deltaIn(bagGroup(), a[1]))
                              return Value::groupChange(bagGroup(), bagNegate(*d));
                            return Value::replace(bagNegate(oplus(a[0], a[1])));
                          },
                          0b01);
                    }};
    t["singletonBagD"] = {1, [](TypeArgs a) { return fn({a[0], dT(a[0]), delta(bag(a[0]))}); },
                          [](TypeArgs) {
                            return native("singletonBagD", 2, [](std::span<const Value> a) {
                              BagCounts d;
                              d[toKey(oplus(a[0], a[1]))] += 1;
                              d[toKey(a[0])] -= 1;
                              return Value::groupChange(bagGroup(), Value::bag(std::move(d)));
                            });
                          }};
    t["singletonMapD"] = {
        2,
        [](TypeArgs a) {
          return fn({a[0], dT(a[0]), a[1], dT(a[1]), delta(map(a[0], a[1]))});
        },
        [](TypeArgs a) {
          GroupPtr g = canonicalGroup(*a[1]);
          return native(
              "singletonMapD", 4,
              [g](std::span<const Value> a) {
                Value k2 = oplus(a[0], a[1]);
                if (g && valueEquals(k2, a[0]))
                  if (auto d = deltaIn(g, force(a[3])))
                    return Value::groupChange(mapGroup(g), singletonMap(a[0], *d));
                return Value::replace(singletonMap(k2, oplus(a[2], a[3])));
              },
              0b0100);
        }};
    t["foldBagD"] = {2,
                     [](TypeArgs a) {
                       return fn({group(a[1]), fn(a[0], a[1]), delta(bag(a[0])), dT(a[1])});
                     },
                     [](TypeArgs) {
                       return native("foldBagD", 3, [](std::span<const Value> a) {
                         return foldBagDerivative(a[0], a[1], a[2]);
                       });
                     }};
    t["foldBagDInt"] = {1,
                        [](TypeArgs a) {
                          return fn({group(intT()), fn(a[0], intT()), bag(a[0]),
                                     delta(bag(a[0])), intT()});
                        },
                        [](TypeArgs) {
                          return native(
                              "foldBagDInt", 4,
                              [](std::span<const Value> a) {
                                const CollectionChange& c = a[3].change();
                                const GroupDescriptor& g = *a[0].group();
                                if (c.kind == CollectionChange::Kind::Replace)
                                  return Value(foldBag(g, a[1], c.payload).asInt() -
                                               foldBag(g, a[1], force(a[2])).asInt());
                                return foldBagDerivative(a[0], a[1], a[3]);
                              },
                              0b0100);
                        }};
    t["foldMapD"] = {3,
                     [](TypeArgs a) {
                       return fn({group(a[1]), group(a[2]), fn({a[0], a[1], a[2]}),
                                  delta(map(a[0], a[1])), dT(a[2])});
                     },
                     [](TypeArgs) {
                       return native("foldMapD", 4, [](std::span<const Value> a) {
                         return foldMapDerivative(a[0], a[1], a[2], a[3]);
                       });
                     }};
    t["foldMapDInt"] = {2,
                        [](TypeArgs a) {
                          return fn({group(a[1]), group(intT()), fn({a[0], a[1], intT()}),
                                     map(a[0], a[1]), delta(map(a[0], a[1])), intT()});
                        },
                        [](TypeArgs) {
                          return native(
                              "foldMapDInt", 5,
                              [](std::span<const Value> a) {
                                const CollectionChange& c = a[4].change();
                                const GroupDescriptor& gA = *a[0].group();
                                const GroupDescriptor& gB = *a[1].group();
                                if (c.kind == CollectionChange::Kind::Replace)
                                  return Value(foldMap(gA, gB, a[2], c.payload).asInt() -
                                               foldMap(gA, gB, a[2], force(a[3])).asInt());
                                return foldMapDerivative(a[0], a[1], a[2], a[4]);
                              },
                              0b01000);
                        }};
    return t;
  }();
  return table;
}

bool isIntegerLiteral(std::string_view s) {
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return !s.empty() && ec == std::errc() && p == s.data() + s.size();
}

std::int64_t literalValue(std::string_view s) {
  std::int64_t v = 0;
  std::from_chars(s.data(), s.data() + s.size(), v);
  return v;
}

const Prim& lookupPrim(std::string_view name, TypeArgs typeArgs) {
  auto it = prims().find(name);
  if (it == prims().end()) throw Error(ErrorKind::UnknownConstant, std::string(name));
  if (typeArgs.size() != it->second.typeArity)
    throw Error(ErrorKind::TypeMismatch,
                std::string(name) + " expects " + std::to_string(it->second.typeArity) +
                    " type argument(s), got " + std::to_string(typeArgs.size()));
  return it->second;
}

std::string sx(const TypePtr& t) { return typeToSexpr(*t); }

std::optional<std::string> canonicalGroupText(const Type& t) {
  if (t.isBase("Int")) return "intAdd";
  if (t.isBase("Bag")) return "(inst bagGroup " + sx(t.args()[0]) + ")";
  if (t.isBase("Map")) {
    auto inner = canonicalGroupText(*t.args()[1]);
    if (!inner) return std::nullopt;
    return "((inst mapGroup " + sx(t.args()[0]) + " " + sx(t.args()[1]) + ") " + *inner +
           ")";
  }
  return std::nullopt;
}

}  // namespace

// ---- groups ----

GroupPtr intAddGroup() {
  static const GroupPtr g = makeIntAdd();
  return g;
}

GroupPtr bagGroup() {
  static const GroupPtr g = makeBagGroup();
  return g;
}

GroupPtr mapGroup(GroupPtr payload) {
  static std::mutex mu;
  static std::unordered_map<std::string, GroupPtr> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[payload->name];
  if (!slot) slot = makeMapGroup(std::move(payload));
  return slot;
}

GroupPtr groupNamed(std::string_view name) {
  if (name == "intAdd") return intAddGroup();
  if (name == "bagGroup") return bagGroup();
  constexpr std::string_view prefix = "mapGroup(";
  if (name.size() > prefix.size() + 1 && name.substr(0, prefix.size()) == prefix &&
      name.back() == ')') {
    if (GroupPtr inner = groupNamed(name.substr(prefix.size(), name.size() - prefix.size() - 1)))
      return mapGroup(inner);
  }
  return nullptr;
}

GroupPtr canonicalGroup(const Type& t) {
  if (t.isBase("Int")) return intAddGroup();
  if (t.isBase("Bag")) return bagGroup();
  if (t.isBase("Map") && t.args().size() == 2)
    if (GroupPtr inner = canonicalGroup(*t.args()[1])) return mapGroup(inner);
  return nullptr;
}

GroupPtr canonicalGroupOf(const Value& v) {
  switch (v.kind()) {
    case Value::Kind::Int: return intAddGroup();
    case Value::Kind::Bag: return bagGroup();
    case Value::Kind::Map:
      if (v.map().empty()) return nullptr;
      if (GroupPtr inner = canonicalGroupOf(v.map().begin()->second)) return mapGroup(inner);
      return nullptr;
    default: return nullptr;
  }
}

// ---- bags and maps ----

Value emptyBag() {
  static const Value empty = Value::bag({});
  return empty;
}

Value singletonBag(const Value& element) {
  BagCounts c;
  c.emplace(toKey(element), 1);
  return Value::bag(std::move(c));
}

Value bagUnion(const Value& a, const Value& b) {
  if (a.bag().empty()) return b;
  if (b.bag().empty()) return a;
  const Value& big = a.bag().size() >= b.bag().size() ? a : b;
  const Value& small = &big == &a ? b : a;
  Value out = Value::bag(big.bag());
  addInto(*out.mutableBag(), small.bag());
  return out;
}

Value bagNegate(const Value& a) { return scaleBag(a, -1); }

Value emptyMap() {
  static const Value empty = Value::map({});
  return empty;
}

Value singletonMap(const Value& key, const Value& payload) {
  MapEntries e;
  e.emplace(toKey(key), payload);
  return Value::map(std::move(e));
}

Value foldBag(const GroupDescriptor& g, const Value& f, const Value& bag) {
  Value acc = g.zero;
  for (const auto& [k, m] : bag.bag()) {
    Value y = apply(f, fromKey(k));
    if (m != 1) y = g.power(y, m);
    g.mergeInto(acc, y);
  }
  return acc;
}

Value foldMapGen(const Value& zero, const Value& merge, const Value& f, const Value& map) {
  Value acc = zero;
  for (const auto& [k, v] : map.map()) acc = apply(merge, {acc, apply(f, {fromKey(k), v})});
  return acc;
}

Value foldMap(const GroupDescriptor&, const GroupDescriptor& gB, const Value& f,
              const Value& map) {
  Value acc = gB.zero;
  for (const auto& [k, v] : map.map()) gB.mergeInto(acc, apply(f, {fromKey(k), v}));
  return acc;
}

// ---- plugin ----

CollectionsPlugin::CollectionsPlugin() {
  specs_.add("foldBag", 0b011, Specialization{2, [this](std::span<const TypePtr> a) {
    std::string s = sx(a[0]), t = sx(a[1]);
    std::string head = "(lam (g (Group " + t + ")) (lam (f (-> " + s + " " + t +
                       ")) (lam (b (Bag " + s + ")) (lam (db (Delta (Bag " + s + "))) ";
    if (a[1]->isBase("Int"))
      return parseCached(head + "(app (app-lazy ((inst foldBagDInt " + s +
                         ") g f) b) db)))))");
    return parseCached(head + "((inst foldBagD " + s + " " + t + ") g f db)))))");
  }});
  specs_.add("foldMap", 0b0111, Specialization{3, [this](std::span<const TypePtr> a) {
    std::string k = sx(a[0]), x = sx(a[1]), y = sx(a[2]);
    std::string m = "(Map " + k + " " + x + ")";
    std::string head = "(lam (ga (Group " + x + ")) (lam (gb (Group " + y + ")) (lam (f (-> " +
                       k + " " + x + " " + y + ")) (lam (m " + m + ") (lam (dm (Delta " + m +
                       ")) ";
    if (a[2]->isBase("Int"))
      return parseCached(head + "(app (app-lazy ((inst foldMapDInt " + k + " " + x +
                         ") ga gb f) m) dm))))))");
    return parseCached(head + "((inst foldMapD " + k + " " + x + " " + y +
                       ") ga gb f dm))))))");
  }});
}

TermPtr CollectionsPlugin::parseCached(const std::string& text) const {
  {
    std::lock_guard lock(mutex_);
    if (auto it = parsed_.find(text); it != parsed_.end()) return it->second;
  }
  TermPtr t = parseTerm(text, *this);
  std::lock_guard lock(mutex_);
  return parsed_.emplace(text, t).first->second;
}

bool CollectionsPlugin::hasConstant(std::string_view name) const {
  return isIntegerLiteral(name) || prims().count(name) > 0;
}

TypePtr CollectionsPlugin::constantType(std::string_view name, TypeArgs typeArgs) const {
  if (isIntegerLiteral(name)) {
    if (!typeArgs.empty())
      throw Error(ErrorKind::TypeMismatch, "integer literal takes no type arguments");
    return types::intT();
  }
  TypePtr t = lookupPrim(name, typeArgs).type(typeArgs);
  checkType(*this, *t);
  return t;
}

Value CollectionsPlugin::constantValue(std::string_view name, TypeArgs typeArgs) const {
  if (isIntegerLiteral(name)) return Value(literalValue(name));
  return lookupPrim(name, typeArgs).value(typeArgs);
}

void CollectionsPlugin::checkBaseType(const Type& t) const {
  auto bad = [&] { throw Error(ErrorKind::UnknownBaseType, showType(t)); };
  const auto& a = t.args();
  const std::string& n = t.name();
  if (n == "Int") {
    if (!a.empty()) bad();
  } else if (n == "Bag") {
    if (a.size() != 1 || !isKeyType(*a[0])) bad();
  } else if (n == "Map") {
    if (a.size() != 2 || !isKeyType(*a[0]) || !a[1]->isFirstOrder()) bad();
  } else if (n == "Pair") {
    if (a.size() != 2) bad();
  } else if (n == "Group") {
    if (a.size() != 1 || !(a[0]->isBase("Int") || a[0]->isBase("Bag") || a[0]->isBase("Map")))
      bad();
  } else if (n == "Delta") {
    if (a.size() != 1 || !a[0]->isBase() || a[0]->isBase("Int") || a[0]->isBase("Pair"))
      bad();
  } else {
    bad();
  }
}

TypePtr CollectionsPlugin::baseChangeType(const Type& t) const {
  checkBaseType(t);
  if (t.isBase("Int")) return types::intT();
  if (t.isBase("Pair"))
    return types::pair(changeType(*this, *t.args()[0]), changeType(*this, *t.args()[1]));
  return types::delta(Type::base(t.name(), t.args()));
}

TermPtr CollectionsPlugin::baseOplusTerm(const Type& t) const {
  checkBaseType(t);
  if (t.isBase("Int")) return Term::constant("oplusInt");
  TypePtr self = Type::base(t.name(), t.args());
  if (!t.isBase("Pair")) return Term::constant("oplus", {self});
  const TypePtr& a = t.args()[0];
  const TypePtr& b = t.args()[1];
  TypePtr da = changeType(*this, *a), db = changeType(*this, *b);
  auto sel = [](const char* f, TypePtr x, TypePtr y, const char* v) {
    return Term::app(Term::constant(f, {std::move(x), std::move(y)}), Term::var(v));
  };
  TermPtr first = Term::app(Term::app(erasedOplusTerm(*this, *a), sel("fst", a, b, "p")),
                            sel("fst", da, db, "dp"));
  TermPtr second = Term::app(Term::app(erasedOplusTerm(*this, *b), sel("snd", a, b, "p")),
                             sel("snd", da, db, "dp"));
  TermPtr body = Term::app(Term::app(Term::constant("pair", {a, b}), first), second);
  return Term::lam("p", self, Term::lam("dp", types::pair(da, db), body));
}

TermPtr CollectionsPlugin::baseOminusTerm(const Type& t) const {
  checkBaseType(t);
  if (t.isBase("Int")) return Term::constant("ominusInt");
  TypePtr self = Type::base(t.name(), t.args());
  if (!t.isBase("Pair")) return Term::constant("ominus", {self});
  const TypePtr& a = t.args()[0];
  const TypePtr& b = t.args()[1];
  TypePtr da = changeType(*this, *a), db = changeType(*this, *b);
  auto sel = [&](const char* f, const char* v) {
    return Term::app(Term::constant(f, {a, b}), Term::var(v));
  };
  TermPtr first =
      Term::app(Term::app(erasedOminusTerm(*this, *a), sel("fst", "u")), sel("fst", "v"));
  TermPtr second =
      Term::app(Term::app(erasedOminusTerm(*this, *b), sel("snd", "u")), sel("snd", "v"));
  TermPtr body = Term::app(Term::app(Term::constant("pair", {da, db}), first), second);
  return Term::lam("u", self, Term::lam("v", self, body));
}

Value CollectionsPlugin::baseNil(const Type& t, const Value& raw) const {
  Value v = force(raw);
  if (t.isBase("Int")) return Value(std::int64_t{0});
  if (t.isBase("Pair"))
    return Value::pair(nilChange(*this, *t.args()[0], v.first()),
                       nilChange(*this, *t.args()[1], v.second()));
  if (t.isBase("Bag")) return Value::groupChange(bagGroup(), emptyBag());
  if (t.isBase("Map"))
    if (GroupPtr g = canonicalGroup(*t.args()[1]))
      return Value::groupChange(mapGroup(g), emptyMap());
  return Value::replace(v);
}

bool CollectionsPlugin::baseMember(const Type& t, const Value& rawV, const Value& rawDv) const {
  Value v = force(rawV);
  Value dv = force(rawDv);
  if (t.isBase("Int")) return dv.isInt();
  if (t.isBase("Pair")) {
    if (!dv.isPair()) return false;
    for (int i = 0; i < 2; ++i) {
      const Type& c = *t.args()[i];
      const Value& cv = i == 0 ? v.first() : v.second();
      const Value& cdv = i == 0 ? dv.first() : dv.second();
      bool ok = c.isArrow() ? force(cdv).isFunction() : baseMember(c, cv, cdv);
      if (!ok) return false;
    }
    return true;
  }
  if (!dv.isChange()) return false;
  const CollectionChange& c = dv.change();
  if (c.payload.kind() != v.kind()) return false;
  if (c.kind == CollectionChange::Kind::Replace) return true;
  if (t.isBase("Bag")) return c.group->name == "bagGroup";
  if (t.isBase("Map"))
    return c.group->name.rfind("mapGroup(", 0) == 0 && groupNamed(c.group->name) != nullptr;
  return false;
}

std::optional<TermPtr> CollectionsPlugin::derivativeTerm(std::string_view name,
                                                         TypeArgs a) const {
  if (isIntegerLiteral(name) || !prims().count(name)) return std::nullopt;
  lookupPrim(name, a);
  auto d = [&](std::size_t i) { return sx(dT(a[i])); };
  const std::string ints =
      "(lam (x Int) (lam (dx Int) (lam (y Int) (lam (dy Int) ";
  if (name == "plus" || name == "oplusInt") return parseCached(ints + "(plus dx dy)))))");
  if (name == "minus" || name == "ominusInt") return parseCached(ints + "(minus dx dy)))))");
  if (name == "mul")
    return parseCached(ints + "(plus (plus (mul x dy) (mul dx y)) (mul dx dy))))))");
  if (name == "negInt") return parseCached("(lam (x Int) (lam (dx Int) (negInt dx)))");
  if (name == "union") return parseCached("(inst unionD " + sx(a[0]) + ")");
  if (name == "negate") return parseCached("(inst negateD " + sx(a[0]) + ")");
  if (name == "singletonBag") return parseCached("(inst singletonBagD " + sx(a[0]) + ")");
  if (name == "singletonMap")
    return parseCached("(inst singletonMapD " + sx(a[0]) + " " + sx(a[1]) + ")");
  if (name == "emptyBag")
    return parseCached("((inst groupChange (Bag " + sx(a[0]) + ")) (inst bagGroup " +
                       sx(a[0]) + ") (inst emptyBag " + sx(a[0]) + "))");
  if (name == "emptyMap") {
    std::string m = "(Map " + sx(a[0]) + " " + sx(a[1]) + ")";
    std::string empty = "(inst emptyMap " + sx(a[0]) + " " + sx(a[1]) + ")";
    if (auto g = canonicalGroupText(*types::map(a[0], a[1])))
      return parseCached("((inst groupChange " + m + ") " + *g + " " + empty + ")");
    return parseCached("((inst replace " + m + ") " + empty + ")");
  }
  if (name == "pair")
    return parseCached("(lam (a " + sx(a[0]) + ") (lam (da " + d(0) + ") (lam (b " + sx(a[1]) +
                       ") (lam (db " + d(1) + ") ((inst pair " + d(0) + " " + d(1) +
                       ") da db)))))");
  if (name == "fst" || name == "snd")
    return parseCached("(lam (p (Pair " + sx(a[0]) + " " + sx(a[1]) + ")) (lam (dp (Pair " +
                       d(0) + " " + d(1) + ")) ((inst " + std::string(name) + " " + d(0) +
                       " " + d(1) + ") dp)))");
  if (name == "foldBag" || name == "foldMap") {
    std::string key = std::string(name) + "'";
    for (const auto& t : a) key += " " + sx(t);
    {
      std::lock_guard lock(mutex_);
      if (auto it = parsed_.find(key); it != parsed_.end()) return it->second;
    }
    TermPtr c = Term::constant(std::string(name), {a.begin(), a.end()});
    TermPtr built = fallbackConstantDerivative(*this, c, *constantType(name, a));
    std::lock_guard lock(mutex_);
    return parsed_.emplace(key, built).first->second;
  }
  return std::nullopt;
}

const CollectionsPlugin& plugin() {
  static const CollectionsPlugin instance;
  return instance;
}

}  // namespace ilc::collections
