#include "ilc/change.hpp"

#include "ilc/collections.hpp"
#include "ilc/error.hpp"

namespace ilc {

namespace {

bool isCollectionLike(const Value& v) {
  return v.isBag() || v.isMap() || v.isGroup() || v.isChange();
}

[[noreturn]] void mismatch(const Value& v, const Value& dv) {
  throw Error(ErrorKind::ChangeTypeMismatch,
              showValue(dv) + " is not a change for " + showValue(v));
}

}  // namespace

Value oplus(const Value& rawV, const Value& rawDv) {
  Value v = force(rawV);
  Value dv = force(rawDv);
  switch (v.kind()) {
    case Value::Kind::Int:
      if (!dv.isInt()) mismatch(v, dv);
      return Value(v.asInt() + dv.asInt());
    case Value::Kind::Pair:
      if (!dv.isPair()) mismatch(v, dv);
      return Value::pair(oplus(v.first(), dv.first()), oplus(v.second(), dv.second()));
    case Value::Kind::Closure:
    case Value::Kind::Native:
      if (!dv.isFunction()) mismatch(v, dv);
      return functionOplus(v, dv);
    default:
      break;
  }
  if (!isCollectionLike(v) || !dv.isChange()) mismatch(v, dv);
  const CollectionChange& c = dv.change();
  if (c.kind == CollectionChange::Kind::Replace) return c.payload;
  if (c.payload.kind() != v.kind()) mismatch(v, dv);
  return c.group->merge(v, c.payload);
}

Value ominus(const Value& rawU, const Value& rawV) {
  Value u = force(rawU);
  Value v = force(rawV);
  if (u.isInt() && v.isInt()) return Value(u.asInt() - v.asInt());
  if (u.isPair() && v.isPair())
    return Value::pair(ominus(u.first(), v.first()), ominus(u.second(), v.second()));
  if (u.isFunction() && v.isFunction()) return functionOminus(u, v);
  if (isCollectionLike(u) && u.kind() == v.kind()) return Value::replace(u);
  throw Error(ErrorKind::ChangeTypeMismatch,
              "no difference between " + showValue(u) + " and " + showValue(v));
}

Value nilChange(const Value& raw) {
  Value v = force(raw);
  switch (v.kind()) {
    case Value::Kind::Int:
      return Value(std::int64_t{0});
    case Value::Kind::Pair:
      return Value::pair(nilChange(v.first()), nilChange(v.second()));
    case Value::Kind::Closure:
    case Value::Kind::Native:
      return functionOminus(v, v);
    case Value::Kind::Bag:
    case Value::Kind::Map:
      if (GroupPtr g = collections::canonicalGroupOf(v)) return Value::groupChange(g, g->zero);
      return Value::replace(v);
    default:
      return Value::replace(v);
  }
}

Value nilChange(const Plugin& plugin, const Type& t, const Value& raw) {
  Value v = force(raw);
  if (t.isArrow()) return functionOminus(v, v);
  return plugin.baseNil(t, v);
}

Value functionOplus(const Value& f, const Value& df) {
  return makeNative("oplus-fn", 1, [f, df](std::span<const Value> a) {
    const Value& v = a[0];
    return oplus(apply(f, v), apply(df, {v, nilChange(v)}));
  });
}

Value functionOminus(const Value& g, const Value& f) {
  return makeNative("ominus-fn", 2, [g, f](std::span<const Value> a) {
    return ominus(apply(g, oplus(a[0], a[1])), apply(f, a[0]));
  });
}

bool isChangeCompatible(const Value& rawV, const Value& rawDv) {
  Value v = force(rawV);
  Value dv = force(rawDv);
  if (v.isInt()) return dv.isInt();
  if (v.isPair())
    return dv.isPair() && isChangeCompatible(v.first(), dv.first()) &&
           isChangeCompatible(v.second(), dv.second());
  if (v.isFunction()) return dv.isFunction();
  if (!dv.isChange()) return false;
  const CollectionChange& c = dv.change();
  if (c.payload.kind() != v.kind()) return false;
  if (c.kind == CollectionChange::Kind::GroupChange)
    return v.isBag() || v.isMap();
  return true;
}

ChangeStructure changeStructureFor(const Plugin& plugin, TypePtr t) {
  checkType(plugin, *t);
  ChangeStructure cs;
  cs.baseType = t;
  cs.member = [&plugin, t](const Value& v, const Value& dv) {
    if (t->isArrow()) return force(v).isFunction() && force(dv).isFunction();
    return plugin.baseMember(*t, force(v), force(dv));
  };
  cs.oplus = [member = cs.member](const Value& v, const Value& dv) {
#ifndef NDEBUG
    if (!member(v, dv)) mismatch(force(v), force(dv));
#endif
    return oplus(v, dv);
  };
  cs.ominus = [](const Value& u, const Value& v) { return ominus(u, v); };
  cs.nil = [&plugin, t](const Value& v) { return nilChange(plugin, *t, v); };
  return cs;
}

ChangeStructure groupToChangeStructure(GroupPtr g) {
  const bool plainInts = g->name == collections::intAddGroup()->name;
  auto unwrap = [g, plainInts](const Value& raw) -> Value {
    Value dv = force(raw);
    if (plainInts && dv.isInt()) return dv;
    if (!dv.isChange() || dv.change().kind != CollectionChange::Kind::GroupChange ||
        dv.change().group->name != g->name)
      throw Error(ErrorKind::GroupMismatch, showValue(dv) + " is not a change in " + g->name);
    return dv.change().payload;
  };
  auto wrap = [g, plainInts](Value d) {
    return plainInts ? d : Value::groupChange(g, std::move(d));
  };
  ChangeStructure cs;
  cs.baseType = g->carrier;
  cs.oplus = [g, unwrap](const Value& v, const Value& dv) {
    return g->merge(force(v), unwrap(dv));
  };
  cs.ominus = [g, wrap](const Value& u, const Value& v) {
    return wrap(g->merge(force(u), g->inverse(force(v))));
  };
  cs.nil = [g, wrap](const Value&) { return wrap(g->zero); };
  cs.member = [unwrap](const Value&, const Value& dv) {
    try {
      unwrap(dv);
      return true;
    } catch (const Error&) {
      return false;
    }
  };
  return cs;
}

bool validateFunctionChange(const Value& f, const Value& df,
                            std::span<const std::pair<Value, Value>> samples) {
  try {
    for (const auto& [a, da] : samples) {
      Value fa = apply(f, a);
      Value out = apply(df, {a, da});
      if (!isChangeCompatible(fa, out)) return false;
      Value updated = oplus(a, da);
      Value lhs = oplus(fa, out);
      Value rhs = oplus(apply(f, updated), apply(df, {updated, nilChange(updated)}));
      if (!valueEquals(lhs, rhs)) return false;
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ChangeTypeMismatch || e.kind() == ErrorKind::GroupMismatch)
      return false;
    throw;
  }
  return true;
}

ChangeEnvironment ChangeEnvironment::extend(const std::string& baseName,
                                            Value change) const {
  return ChangeEnvironment(env_.extend("d" + baseName, std::move(change)));
}

const Value* ChangeEnvironment::lookup(std::string_view baseName) const {
  return env_.lookup("d" + std::string(baseName));
}

Value changeEval(const Plugin& plugin, const TermPtr& t, const Environment& env,
                 const ChangeEnvironment& denv) {
  switch (t->kind()) {
    case Term::Kind::Var: {
      const Value* dv = denv.lookup(t->name());
      if (!dv) throw Error(ErrorKind::UnboundVariable, "d" + t->name());
      return force(*dv);
    }
    case Term::Kind::Const:
      return nilChange(resolveConstantValue(plugin, t->name(), t->typeArgs()));
    case Term::Kind::Lam: {
      const Plugin* p = &plugin;
      return makeNative("change-lam", 2,
                        [p, t, env, denv](std::span<const Value> a) {
                          return changeEval(*p, t->body(), env.extend(t->name(), a[0]),
                                            denv.extend(t->name(), a[1]));
                        });
    }
    case Term::Kind::App: {
      Value ds = changeEval(plugin, t->fun(), env, denv);
      Value base = eval(plugin, t->arg(), env);
      Value dt = changeEval(plugin, t->arg(), env, denv);
      return apply(ds, {base, dt});
    }
  }
  throw Error(ErrorKind::TypeMismatch, "malformed term");
}

}  // namespace ilc
