#include "ilc/plugin.hpp"

#include <algorithm>
#include <bit>

#include "ilc/derive.hpp"
#include "ilc/error.hpp"
#include "ilc/eval.hpp"

namespace ilc {

void SpecializationTable::add(std::string primitive, std::uint32_t nilMask,
                              Specialization s) {
  entries_[{std::move(primitive), nilMask}] = std::move(s);
}

std::vector<std::pair<std::uint32_t, const Specialization*>>
SpecializationTable::lookup(std::string_view primitive) const {
  std::vector<std::pair<std::uint32_t, const Specialization*>> out;
  for (const auto& [key, spec] : entries_)
    if (key.first == primitive) out.emplace_back(key.second, &spec);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::popcount(a.first) > std::popcount(b.first);
  });
  return out;
}

std::optional<std::string_view> derivativeBase(std::string_view name) {
  if (name.size() < 2 || name.back() != kDerivativeSuffix) return std::nullopt;
  return name.substr(0, name.size() - 1);
}

bool isConstantName(const Plugin& plugin, std::string_view name) {
  if (plugin.hasConstant(name)) return true;
  auto base = derivativeBase(name);
  return base && plugin.hasConstant(*base);
}

TypePtr resolveConstantType(const Plugin& plugin, std::string_view name,
                            std::span<const TypePtr> typeArgs) {
  for (const auto& a : typeArgs) checkType(plugin, *a);
  if (plugin.hasConstant(name)) return plugin.constantType(name, typeArgs);
  if (auto base = derivativeBase(name); base && plugin.hasConstant(*base)) {
    if (!plugin.derivativeTerm(*base, typeArgs))
      throw Error(ErrorKind::MissingConstantDerivative, std::string(*base));
    return changeType(plugin, *plugin.constantType(*base, typeArgs));
  }
  throw Error(ErrorKind::UnknownConstant, std::string(name));
}

Value resolveConstantValue(const Plugin& plugin, std::string_view name,
                           std::span<const TypePtr> typeArgs) {
  if (plugin.hasConstant(name)) return plugin.constantValue(name, typeArgs);
  if (auto base = derivativeBase(name); base && plugin.hasConstant(*base)) {
    auto d = plugin.derivativeTerm(*base, typeArgs);
    if (!d) throw Error(ErrorKind::MissingConstantDerivative, std::string(*base));
    return eval(plugin, *d);
  }
  throw Error(ErrorKind::UnknownConstant, std::string(name));
}

void checkType(const Plugin& plugin, const Type& t) {
  if (t.isArrow()) {
    checkType(plugin, *t.domain());
    checkType(plugin, *t.codomain());
    return;
  }
  for (const auto& a : t.args()) checkType(plugin, *a);
  plugin.checkBaseType(t);
}

}  // namespace ilc
