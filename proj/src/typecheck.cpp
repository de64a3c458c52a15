#include "ilc/typecheck.hpp"

#include "ilc/error.hpp"
#include "ilc/eval.hpp"
#include "ilc/syntax.hpp"

namespace ilc {

TypePtr TypingContext::lookup(std::string_view name) const {
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it)
    if (it->first == name) return it->second;
  return nullptr;
}

namespace {

std::string location(const Term& t) {
  std::string text = pretty(t);
  if (text.size() > 80) text = text.substr(0, 77) + "...";
  return text;
}

TypePtr check(const Plugin& plugin, TypingContext& ctx, const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Const:
      return resolveConstantType(plugin, t.name(), t.typeArgs());
    case Term::Kind::Var: {
      TypePtr ty = ctx.lookup(t.name());
      if (!ty) throw Error(ErrorKind::UnboundVariable, t.name());
      return ty;
    }
    case Term::Kind::Lam: {
      checkType(plugin, *t.paramType());
      ctx.push(t.name(), t.paramType());
      TypePtr body = check(plugin, ctx, *t.body());
      ctx.pop();
      return Type::arrow(t.paramType(), body);
    }
    case Term::Kind::App: {
      TypePtr f = check(plugin, ctx, *t.fun());
      if (!f->isArrow())
        throw Error(ErrorKind::NotAFunction,
                    showType(*f) + " applied to an argument at " + location(t));
      TypePtr a = check(plugin, ctx, *t.arg());
      if (!typeEquals(*f->domain(), *a))
        throw Error(ErrorKind::TypeMismatch, "expected " + showType(*f->domain()) +
                                                 ", actual " + showType(*a) + " at " +
                                                 location(*t.arg()));
      return f->codomain();
    }
  }
  throw Error(ErrorKind::TypeMismatch, "malformed term");
}

bool keyHasType(const Key& k, const Type& t) {
  if (t.isBase("Int")) return !k.isPair;
  return k.isPair && t.isBase("Pair") && t.args()[0]->isBase("Int") &&
         t.args()[1]->isBase("Int");
}

}  // namespace

TypePtr typecheck(const Plugin& plugin, const TypingContext& ctx, const Term& t) {
  TypingContext scratch = ctx;
  for (const auto& [name, ty] : ctx.entries()) checkType(plugin, *ty);
  return check(plugin, scratch, t);
}

bool valueHasType(const Value& raw, const Type& t) {
  Value v = force(raw);
  if (t.isArrow()) return v.isFunction();
  const std::string& n = t.name();
  if (n == "Int") return v.isInt();
  if (n == "Bag") {
    if (!v.isBag()) return false;
    for (const auto& [k, m] : v.bag())
      if (m == 0 || !keyHasType(k, *t.args()[0])) return false;
    return true;
  }
  if (n == "Map") {
    if (!v.isMap()) return false;
    for (const auto& [k, x] : v.map())
      if (!keyHasType(k, *t.args()[0]) || !valueHasType(x, *t.args()[1]))
        return false;
    return true;
  }
  if (n == "Pair")
    return v.isPair() && valueHasType(v.first(), *t.args()[0]) &&
           valueHasType(v.second(), *t.args()[1]);
  if (n == "Group") return v.isGroup();
  if (n == "Delta") return v.isChange() && valueHasType(v.change().payload, *t.args()[0]);
  return false;
}

}  // namespace ilc
