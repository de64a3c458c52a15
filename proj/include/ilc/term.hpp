#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "ilc/type.hpp"

namespace ilc {

class Term;
using TermPtr = std::shared_ptr<const Term>;

/// Object-language syntax: constants (optionally instantiated at type
/// arguments), variables, annotated lambdas and applications.
///
/// An application may mark its argument as deferred. Derive marks the base
/// argument `t` of `Derive(s) t Derive(t)` this way; the evaluator then
/// passes it as a memoized thunk instead of evaluating it eagerly.
class Term {
 public:
  enum class Kind { Const, Var, Lam, App };

  static TermPtr constant(std::string name, std::vector<TypePtr> typeArgs = {});
  static TermPtr var(std::string name);
  static TermPtr lam(std::string param, TypePtr paramType, TermPtr body);
  static TermPtr app(TermPtr fun, TermPtr arg, bool deferArg = false);

  Kind kind() const noexcept { return kind_; }
  bool isConst() const noexcept { return kind_ == Kind::Const; }
  bool isVar() const noexcept { return kind_ == Kind::Var; }
  bool isLam() const noexcept { return kind_ == Kind::Lam; }
  bool isApp() const noexcept { return kind_ == Kind::App; }

  /// Constant name, variable name or lambda parameter.
  const std::string& name() const noexcept { return name_; }
  const std::vector<TypePtr>& typeArgs() const noexcept { return typeArgs_; }
  const TypePtr& paramType() const noexcept { return paramType_; }
  const TermPtr& body() const noexcept { return left_; }
  const TermPtr& fun() const noexcept { return left_; }
  const TermPtr& arg() const noexcept { return right_; }
  bool deferArg() const noexcept { return deferArg_; }

 private:
  Term(Kind kind, std::string name, std::vector<TypePtr> typeArgs,
       TypePtr paramType, TermPtr left, TermPtr right, bool deferArg);

  Kind kind_;
  std::string name_;
  std::vector<TypePtr> typeArgs_;
  TypePtr paramType_;
  TermPtr left_;
  TermPtr right_;
  bool deferArg_ = false;
};

std::set<std::string> freeVars(const Term& t);

/// Structural equality modulo renaming of bound variables. Deferral flags
/// are ignored: they affect cost, not meaning.
bool alphaEquivalent(const Term& a, const Term& b);

/// Number of syntax nodes.
std::size_t termSize(const Term& t);

/// Decomposes `((h a1) a2) ... an` into its head and arguments.
struct Spine {
  TermPtr head;
  std::vector<TermPtr> args;
  std::vector<bool> deferred;
};
Spine unspine(const TermPtr& t);
TermPtr respine(const Spine& s);

}  // namespace ilc
