#include "ilc/analysis.hpp"

#include <vector>

namespace ilc {

namespace {

std::set<std::string> closedWalk(const TermPtr& t, ClosednessMap& out) {
  std::set<std::string> fv;
  switch (t->kind()) {
    case Term::Kind::Const: break;
    case Term::Kind::Var: fv.insert(t->name()); break;
    case Term::Kind::Lam:
      fv = closedWalk(t->body(), out);
      fv.erase(t->name());
      break;
    case Term::Kind::App: {
      fv = closedWalk(t->fun(), out);
      auto a = closedWalk(t->arg(), out);
      fv.insert(a.begin(), a.end());
      break;
    }
  }
  out[t.get()] = fv.empty();
  return fv;
}

TermPtr rewrite(const TermPtr& t, const SpecializationTable& table) {
  switch (t->kind()) {
    case Term::Kind::Const:
    case Term::Kind::Var: return t;
    case Term::Kind::Lam: {
      TermPtr body = rewrite(t->body(), table);
      return body == t->body() ? t : Term::lam(t->name(), t->paramType(), body);
    }
    case Term::Kind::App: break;
  }
  Spine sp = unspine(t);
  bool changed = false;
  for (auto& a : sp.args) {
    TermPtr r = rewrite(a, table);
    changed |= r != a;
    a = r;
  }
  if (sp.head->isConst()) {
    if (auto base = derivativeBase(sp.head->name())) {
      for (const auto& [mask, spec] : table.lookup(*base)) {
        if (sp.args.size() < 2 * spec->pairs) continue;
        bool ok = true;
        for (std::size_t i = 0; i < spec->pairs && ok; ++i)
          if (mask & (1u << i)) ok = freeVars(*sp.args[2 * i]).empty();
        if (!ok) continue;
        Spine out;
        out.head = spec->build(sp.head->typeArgs());
        for (std::size_t i = 0; i < spec->pairs; ++i) {
          if (!(mask & (1u << i))) continue;
          out.args.push_back(sp.args[2 * i]);
          out.deferred.push_back(false);
        }
        for (std::size_t i = 2 * spec->pairs; i < sp.args.size(); ++i) {
          out.args.push_back(sp.args[i]);
          out.deferred.push_back(sp.deferred[i]);
        }
        return respine(out);
      }
    }
  }
  return changed ? respine(sp) : t;
}

}  // namespace

ClosednessMap markClosed(const TermPtr& t) {
  ClosednessMap out;
  closedWalk(t, out);
  return out;
}

TermPtr specialize(const TermPtr& t, const SpecializationTable& table) {
  if (table.empty()) return t;
  return rewrite(t, table);
}

bool isSelfMaintainable(const Term& d) {
  std::vector<std::string> params;
  const Term* cur = &d;
  while (cur->isLam()) {
    params.push_back(cur->name());
    cur = cur->body().get();
  }
  std::set<std::string> fv = freeVars(*cur);
  for (std::size_t i = 0; i + 1 < params.size(); ++i) {
    if (params[i + 1] != "d" + params[i]) continue;
    if (fv.count(params[i])) return false;
    ++i;
  }
  return true;
}

}  // namespace ilc
