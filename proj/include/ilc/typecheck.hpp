#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ilc/plugin.hpp"
#include "ilc/term.hpp"
#include "ilc/type.hpp"

namespace ilc {

/// Γ: ordered bindings, lookup returns the rightmost one.
class TypingContext {
 public:
  TypingContext() = default;
  TypingContext(std::initializer_list<std::pair<std::string, TypePtr>> entries)
      : entries_(entries) {}

  void push(std::string name, TypePtr type) {
    entries_.emplace_back(std::move(name), std::move(type));
  }
  void pop() { entries_.pop_back(); }
  TypePtr lookup(std::string_view name) const;

  const std::vector<std::pair<std::string, TypePtr>>& entries() const noexcept {
    return entries_;
  }
  std::size_t size() const noexcept { return entries_.size(); }

  /// Γ₁ followed by Γ₂.
  friend TypingContext operator+(TypingContext a, const TypingContext& b) {
    for (const auto& e : b.entries_) a.entries_.push_back(e);
    return a;
  }

 private:
  std::vector<std::pair<std::string, TypePtr>> entries_;
};

/// Γ ⊢ t : τ by the CONST / LOOKUP / LAM / APP rules.
TypePtr typecheck(const Plugin& plugin, const TypingContext& ctx, const Term& t);
inline TypePtr typecheck(const Plugin& plugin, const Term& t) {
  return typecheck(plugin, TypingContext{}, t);
}

/// Does `v` inhabit `t`? Functions are accepted at any arrow type (their
/// behaviour is not inspected); deferred values are forced.
bool valueHasType(const Value& v, const Type& t);

}  // namespace ilc
