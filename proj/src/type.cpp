#include "ilc/type.hpp"

#include <cassert>

#include "ilc/error.hpp"

namespace ilc {

std::string_view errorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnboundVariable: return "UnboundVariable";
    case ErrorKind::TypeMismatch: return "TypeMismatch";
    case ErrorKind::NotAFunction: return "NotAFunction";
    case ErrorKind::UnknownConstant: return "UnknownConstant";
    case ErrorKind::UnknownBaseType: return "UnknownBaseType";
    case ErrorKind::ChangeTypeMismatch: return "ChangeTypeMismatch";
    case ErrorKind::NameClash: return "NameClash";
    case ErrorKind::MissingConstantDerivative: return "MissingConstantDerivative";
    case ErrorKind::GroupMismatch: return "GroupMismatch";
    case ErrorKind::FuelExhausted: return "FuelExhausted";
    case ErrorKind::InvalidSize: return "InvalidSize";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::DegenerateInput: return "DegenerateInput";
    case ErrorKind::VerificationFailed: return "VerificationFailed";
  }
  return "Error";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(errorKindName(kind)) + ": " + message),
      kind_(kind) {}

Type::Type(Kind kind, std::string name, std::vector<TypePtr> args,
           TypePtr domain, TypePtr codomain)
    : kind_(kind),
      name_(std::move(name)),
      args_(std::move(args)),
      domain_(std::move(domain)),
      codomain_(std::move(codomain)) {}

TypePtr Type::base(std::string name, std::vector<TypePtr> args) {
  return TypePtr(new Type(Kind::Base, std::move(name), std::move(args), nullptr,
                          nullptr));
}

TypePtr Type::arrow(TypePtr domain, TypePtr codomain) {
  assert(domain && codomain);
  return TypePtr(
      new Type(Kind::Arrow, "->", {}, std::move(domain), std::move(codomain)));
}

bool Type::isFirstOrder() const noexcept {
  if (isArrow()) return false;
  for (const auto& a : args_)
    if (!a->isFirstOrder()) return false;
  return true;
}

bool typeEquals(const Type& a, const Type& b) {
  if (&a == &b) return true;
  if (a.kind() != b.kind()) return false;
  if (a.isArrow())
    return typeEquals(*a.domain(), *b.domain()) &&
           typeEquals(*a.codomain(), *b.codomain());
  if (a.name() != b.name() || a.args().size() != b.args().size()) return false;
  for (std::size_t i = 0; i < a.args().size(); ++i)
    if (!typeEquals(*a.args()[i], *b.args()[i])) return false;
  return true;
}

namespace {

// Base-type arguments and arrow domains need parentheses unless atomic.
std::string showAtom(const Type& t) {
  if (t.isBase() && t.args().empty()) return t.name();
  return "(" + showType(t) + ")";
}

}  // namespace

std::string showType(const Type& t) {
  if (t.isArrow()) {
    std::string lhs = t.domain()->isArrow() ? "(" + showType(*t.domain()) + ")"
                                            : showType(*t.domain());
    return lhs + " -> " + showType(*t.codomain());
  }
  std::string out = t.name();
  for (const auto& a : t.args()) out += " " + showAtom(*a);
  return out;
}

std::string typeToSexpr(const Type& t) {
  if (t.isArrow())
    return "(-> " + typeToSexpr(*t.domain()) + " " + typeToSexpr(*t.codomain()) +
           ")";
  if (t.args().empty()) return t.name();
  std::string out = "(" + t.name();
  for (const auto& a : t.args()) out += " " + typeToSexpr(*a);
  return out + ")";
}

namespace types {

TypePtr intT() {
  static const TypePtr t = Type::base("Int");
  return t;
}
TypePtr bag(TypePtr elem) { return Type::base("Bag", {std::move(elem)}); }
TypePtr map(TypePtr key, TypePtr value) {
  return Type::base("Map", {std::move(key), std::move(value)});
}
TypePtr pair(TypePtr first, TypePtr second) {
  return Type::base("Pair", {std::move(first), std::move(second)});
}
TypePtr group(TypePtr carrier) {
  return Type::base("Group", {std::move(carrier)});
}
TypePtr delta(TypePtr base) { return Type::base("Delta", {std::move(base)}); }
TypePtr fn(TypePtr domain, TypePtr codomain) {
  return Type::arrow(std::move(domain), std::move(codomain));
}
TypePtr fn(std::initializer_list<TypePtr> chain) {
  assert(chain.size() >= 1);
  auto it = chain.end();
  TypePtr result = *--it;
  while (it != chain.begin()) result = Type::arrow(*--it, result);
  return result;
}

}  // namespace types

}  // namespace ilc
