#include "ilc/term.hpp"

#include <algorithm>
#include <cassert>
#include <utility>

namespace ilc {

Term::Term(Kind kind, std::string name, std::vector<TypePtr> typeArgs,
           TypePtr paramType, TermPtr left, TermPtr right, bool deferArg)
    : kind_(kind),
      name_(std::move(name)),
      typeArgs_(std::move(typeArgs)),
      paramType_(std::move(paramType)),
      left_(std::move(left)),
      right_(std::move(right)),
      deferArg_(deferArg) {}

TermPtr Term::constant(std::string name, std::vector<TypePtr> typeArgs) {
  return TermPtr(new Term(Kind::Const, std::move(name), std::move(typeArgs),
                          nullptr, nullptr, nullptr, false));
}

TermPtr Term::var(std::string name) {
  return TermPtr(
      new Term(Kind::Var, std::move(name), {}, nullptr, nullptr, nullptr, false));
}

TermPtr Term::lam(std::string param, TypePtr paramType, TermPtr body) {
  assert(paramType && body);
  return TermPtr(new Term(Kind::Lam, std::move(param), {}, std::move(paramType),
                          std::move(body), nullptr, false));
}

TermPtr Term::app(TermPtr fun, TermPtr arg, bool deferArg) {
  assert(fun && arg);
  return TermPtr(new Term(Kind::App, {}, {}, nullptr, std::move(fun),
                          std::move(arg), deferArg));
}

namespace {

void collectFree(const Term& t, std::vector<std::string>& bound,
                 std::set<std::string>& out) {
  switch (t.kind()) {
    case Term::Kind::Const:
      return;
    case Term::Kind::Var:
      if (std::find(bound.begin(), bound.end(), t.name()) == bound.end())
        out.insert(t.name());
      return;
    case Term::Kind::Lam:
      bound.push_back(t.name());
      collectFree(*t.body(), bound, out);
      bound.pop_back();
      return;
    case Term::Kind::App:
      collectFree(*t.fun(), bound, out);
      collectFree(*t.arg(), bound, out);
      return;
  }
}

// Bound variables are compared by binding depth (de Bruijn level).
using Scope = std::vector<std::pair<std::string, std::string>>;

bool alphaEq(const Term& a, const Term& b, Scope& scope) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Term::Kind::Const: {
      if (a.name() != b.name() || a.typeArgs().size() != b.typeArgs().size())
        return false;
      for (std::size_t i = 0; i < a.typeArgs().size(); ++i)
        if (!typeEquals(a.typeArgs()[i], b.typeArgs()[i])) return false;
      return true;
    }
    case Term::Kind::Var: {
      for (auto it = scope.rbegin(); it != scope.rend(); ++it) {
        bool hitA = it->first == a.name();
        bool hitB = it->second == b.name();
        if (hitA || hitB) return hitA && hitB;
      }
      return a.name() == b.name();
    }
    case Term::Kind::Lam: {
      if (!typeEquals(a.paramType(), b.paramType())) return false;
      scope.emplace_back(a.name(), b.name());
      bool eq = alphaEq(*a.body(), *b.body(), scope);
      scope.pop_back();
      return eq;
    }
    case Term::Kind::App:
      return alphaEq(*a.fun(), *b.fun(), scope) &&
             alphaEq(*a.arg(), *b.arg(), scope);
  }
  return false;
}

}  // namespace

std::set<std::string> freeVars(const Term& t) {
  std::vector<std::string> bound;
  std::set<std::string> out;
  collectFree(t, bound, out);
  return out;
}

bool alphaEquivalent(const Term& a, const Term& b) {
  Scope scope;
  return alphaEq(a, b, scope);
}

std::size_t termSize(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Const:
    case Term::Kind::Var:
      return 1;
    case Term::Kind::Lam:
      return 1 + termSize(*t.body());
    case Term::Kind::App:
      return 1 + termSize(*t.fun()) + termSize(*t.arg());
  }
  return 0;
}

Spine unspine(const TermPtr& t) {
  Spine s;
  TermPtr cur = t;
  while (cur->isApp()) {
    s.args.push_back(cur->arg());
    s.deferred.push_back(cur->deferArg());
    cur = cur->fun();
  }
  s.head = cur;
  std::reverse(s.args.begin(), s.args.end());
  std::reverse(s.deferred.begin(), s.deferred.end());
  return s;
}

TermPtr respine(const Spine& s) {
  TermPtr t = s.head;
  for (std::size_t i = 0; i < s.args.size(); ++i)
    t = Term::app(t, s.args[i], s.deferred[i]);
  return t;
}

}  // namespace ilc
