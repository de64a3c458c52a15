#include "ilc/derive.hpp"

#include <set>

#include "ilc/error.hpp"

namespace ilc {

TypePtr changeType(const Plugin& plugin, const Type& t) {
  if (t.isArrow())
    return types::fn({t.domain(), changeType(plugin, *t.domain()),
                      changeType(plugin, *t.codomain())});
  return plugin.baseChangeType(t);
}

TypingContext changeContext(const Plugin& plugin, const TypingContext& ctx) {
  TypingContext out;
  for (const auto& [name, type] : ctx.entries()) {
    if (!name.empty() && name[0] == 'd')
      throw Error(ErrorKind::NameClash, "context variable " + name + " starts with 'd'");
    out.push("d" + name, changeType(plugin, *type));
  }
  return out;
}

namespace {

void collectNames(const Term& t, std::set<std::string>& out) {
  switch (t.kind()) {
    case Term::Kind::Const: return;
    case Term::Kind::Var: out.insert(t.name()); return;
    case Term::Kind::Lam:
      out.insert(t.name());
      collectNames(*t.body(), out);
      return;
    case Term::Kind::App:
      collectNames(*t.fun(), out);
      collectNames(*t.arg(), out);
      return;
  }
}

class Renamer {
 public:
  explicit Renamer(const Term& t) { collectNames(t, used_); }

  TermPtr run(const TermPtr& t, std::vector<std::pair<std::string, std::string>>& scope) {
    switch (t->kind()) {
      case Term::Kind::Const: return t;
      case Term::Kind::Var:
        for (auto it = scope.rbegin(); it != scope.rend(); ++it)
          if (it->first == t->name()) return it->first == it->second ? t : Term::var(it->second);
        return t;
      case Term::Kind::Lam: {
        std::string name = t->name();
        if (!name.empty() && name[0] == 'd') name = fresh();
        scope.emplace_back(t->name(), name);
        TermPtr body = run(t->body(), scope);
        scope.pop_back();
        if (name == t->name() && body == t->body()) return t;
        return Term::lam(name, t->paramType(), body);
      }
      case Term::Kind::App: {
        TermPtr f = run(t->fun(), scope);
        TermPtr a = run(t->arg(), scope);
        if (f == t->fun() && a == t->arg()) return t;
        return Term::app(f, a, t->deferArg());
      }
    }
    return t;
  }

 private:
  std::string fresh() {
    for (;;) {
      std::string n = "x_" + std::to_string(next_++);
      if (used_.insert(n).second) return n;
    }
  }

  std::set<std::string> used_;
  int next_ = 0;
};

TermPtr deriveImpl(const TermPtr& t, const DeriveConfig& cfg) {
  const Plugin& plugin = *cfg.plugin;
  switch (t->kind()) {
    case Term::Kind::Var: return Term::var("d" + t->name());
    case Term::Kind::Lam:
      return Term::lam(t->name(), t->paramType(),
                       Term::lam("d" + t->name(), changeType(plugin, *t->paramType()),
                                 deriveImpl(t->body(), cfg)));
    case Term::Kind::App:
      return Term::app(Term::app(deriveImpl(t->fun(), cfg), t->arg(), true),
                       deriveImpl(t->arg(), cfg));
    case Term::Kind::Const: {
      if (cfg.useDerivativeTable && plugin.hasConstant(t->name()) &&
          plugin.derivativeTerm(t->name(), t->typeArgs()))
        return Term::constant(t->name() + kDerivativeSuffix, t->typeArgs());
      TypePtr ty = resolveConstantType(plugin, t->name(), t->typeArgs());
      return fallbackConstantDerivative(plugin, t, *ty);
    }
  }
  throw Error(ErrorKind::TypeMismatch, "malformed term");
}

}  // namespace

TermPtr renameAvoidingD(const TermPtr& t) {
  std::vector<std::pair<std::string, std::string>> scope;
  return Renamer(*t).run(t, scope);
}

TermPtr derive(const TermPtr& t, const DeriveConfig& config) {
  if (!config.plugin) throw Error(ErrorKind::TypeMismatch, "derive needs a plugin");
  return deriveImpl(t, config);
}

TermPtr erasedOplusTerm(const Plugin& plugin, const Type& t) {
  if (!t.isArrow()) return plugin.baseOplusTerm(t);
  // λf df x. (f x) ⊕ (df x (x ⊖ x))
  const TypePtr& s = t.domain();
  TypePtr self = Type::arrow(t.domain(), t.codomain());
  TermPtr x = Term::var("x");
  TermPtr nil = Term::app(Term::app(erasedOminusTerm(plugin, *s), x), x);
  TermPtr dfx = Term::app(Term::app(Term::var("df"), x), nil);
  TermPtr body =
      Term::app(Term::app(erasedOplusTerm(plugin, *t.codomain()), Term::app(Term::var("f"), x)),
                dfx);
  return Term::lam("f", self,
                   Term::lam("df", changeType(plugin, *self), Term::lam("x", s, body)));
}

TermPtr erasedOminusTerm(const Plugin& plugin, const Type& t) {
  if (!t.isArrow()) return plugin.baseOminusTerm(t);
  // λg f x dx. g (x ⊕ dx) ⊖ f x
  const TypePtr& s = t.domain();
  TypePtr self = Type::arrow(t.domain(), t.codomain());
  TermPtr x = Term::var("x");
  TermPtr moved = Term::app(Term::app(erasedOplusTerm(plugin, *s), x), Term::var("dx"));
  TermPtr body = Term::app(
      Term::app(erasedOminusTerm(plugin, *t.codomain()), Term::app(Term::var("g"), moved)),
      Term::app(Term::var("f"), x));
  return Term::lam(
      "g", self,
      Term::lam("f", self,
                Term::lam("x", s, Term::lam("dx", changeType(plugin, *s), body))));
}

TermPtr fallbackConstantDerivative(const Plugin& plugin, const TermPtr& c, const Type& t) {
  return Term::app(Term::app(erasedOminusTerm(plugin, t), c), c);
}

}  // namespace ilc
