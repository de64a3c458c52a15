#pragma once

#include <memory>
#include <string>
#include <vector>

namespace ilc {

class Type;
using TypePtr = std::shared_ptr<const Type>;

/// Simple types: a base type (name plus type arguments, e.g. `Map Int Int`)
/// or a function type. Parameterized bases encode the plugin's families.
class Type {
 public:
  enum class Kind { Base, Arrow };

  static TypePtr base(std::string name, std::vector<TypePtr> args = {});
  static TypePtr arrow(TypePtr domain, TypePtr codomain);

  Kind kind() const noexcept { return kind_; }
  bool isBase() const noexcept { return kind_ == Kind::Base; }
  bool isArrow() const noexcept { return kind_ == Kind::Arrow; }

  const std::string& name() const noexcept { return name_; }
  const std::vector<TypePtr>& args() const noexcept { return args_; }
  const TypePtr& domain() const noexcept { return domain_; }
  const TypePtr& codomain() const noexcept { return codomain_; }

  bool isBase(std::string_view name) const noexcept {
    return kind_ == Kind::Base && name_ == name;
  }

  /// True when no arrow occurs anywhere in the type.
  bool isFirstOrder() const noexcept;

 private:
  Type(Kind kind, std::string name, std::vector<TypePtr> args, TypePtr domain,
       TypePtr codomain);

  Kind kind_;
  std::string name_;
  std::vector<TypePtr> args_;
  TypePtr domain_;
  TypePtr codomain_;
};

bool typeEquals(const Type& a, const Type& b);
inline bool typeEquals(const TypePtr& a, const TypePtr& b) {
  return typeEquals(*a, *b);
}

/// Human notation: `Map Int (Bag Int) -> Map Int Int`.
std::string showType(const Type& t);
/// Surface-grammar notation: `(-> (Map Int (Bag Int)) (Map Int Int))`.
std::string typeToSexpr(const Type& t);

// Shorthands for the plugin's base families.
namespace types {
TypePtr intT();
TypePtr bag(TypePtr elem);
TypePtr map(TypePtr key, TypePtr value);
TypePtr pair(TypePtr first, TypePtr second);
TypePtr group(TypePtr carrier);
TypePtr delta(TypePtr base);
TypePtr fn(TypePtr domain, TypePtr codomain);
/// Right-nested arrows: fn({a, b, c}) == a -> b -> c.
TypePtr fn(std::initializer_list<TypePtr> chain);
}  // namespace types

}  // namespace ilc
