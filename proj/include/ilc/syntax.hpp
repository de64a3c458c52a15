#pragma once

#include <string>
#include <string_view>

#include "ilc/term.hpp"
#include "ilc/type.hpp"
#include "ilc/value.hpp"

namespace ilc {

class Plugin;

// Surface grammar (S-expressions, `;` starts a line comment):
//
//   term  ::= ident | int | (lam (ident type) term) | (app term term+)
//           | (app-lazy term term) | (inst ident type*) | (term term+)
//   type  ::= ident | (-> type type+) | (ident type+)
//   value ::= int | (bag elem*) | (map (key value)*) | (pair value value)
//           | (replace value) | (groupchange group value) | group
//   elem  ::= key | (* key int)        ; element with signed multiplicity
//   group ::= intAdd | bagGroup | mapGroup(group) | (mapGroup group)
//
// An identifier is a variable when bound by an enclosing `lam`, a constant
// when the plugin knows it, and a free variable otherwise.

TermPtr parseTerm(std::string_view text, const Plugin& plugin);
TypePtr parseType(std::string_view text);
Value parseValue(std::string_view text, const Plugin& plugin);

/// Inverse of parseTerm up to whitespace; deferred arguments print as
/// `(app-lazy f x)`.
std::string pretty(const Term& t);

}  // namespace ilc
