#include "ilc/syntax.hpp"

#include <cctype>
#include <charconv>
#include <optional>
#include <vector>

#include "ilc/error.hpp"
#include "ilc/plugin.hpp"

namespace ilc {

namespace {

struct Sexpr {
  bool atom = false;
  std::string text;
  std::vector<Sexpr> items;
  int line = 1;
  int col = 1;
};

[[noreturn]] void syntaxError(int line, int col, const std::string& expected) {
  throw Error(ErrorKind::SyntaxError, std::to_string(line) + ":" +
                                          std::to_string(col) + ": expected " +
                                          expected);
}

[[noreturn]] void syntaxError(const Sexpr& at, const std::string& expected) {
  syntaxError(at.line, at.col, expected);
}

class Reader {
 public:
  explicit Reader(std::string_view src) : src_(src) {}

  std::vector<Sexpr> readAll() {
    std::vector<Sexpr> out;
    skip();
    while (pos_ < src_.size()) {
      out.push_back(read());
      skip();
    }
    return out;
  }

 private:
  char peek() const { return pos_ < src_.size() ? src_[pos_] : '\0'; }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == ';') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  Sexpr read() {
    skip();
    Sexpr s;
    s.line = line_;
    s.col = col_;
    if (pos_ >= src_.size()) syntaxError(line_, col_, "expression");
    char c = peek();
    if (c == ')') syntaxError(line_, col_, "expression, found ')'");
    if (c == '(') {
      advance();
      skip();
      while (peek() != ')') {
        if (pos_ >= src_.size()) syntaxError(line_, col_, "')'");
        s.items.push_back(read());
        skip();
      }
      advance();
      return s;
    }
    s.atom = true;
    while (pos_ < src_.size()) {
      c = peek();
      if (std::isspace(static_cast<unsigned char>(c)) || c == ')' || c == ';') break;
      if (c == '(') {
        // `mapGroup(bagGroup)` style group names are a single atom.
        if (s.text != "mapGroup" && s.text.rfind("mapGroup(", 0) != 0) break;
        int depth = 0;
        do {
          if (peek() == '(') ++depth;
          if (peek() == ')') --depth;
          s.text += peek();
          advance();
        } while (depth > 0 && pos_ < src_.size());
        if (depth != 0) syntaxError(line_, col_, "')' closing group name");
        continue;
      }
      s.text += c;
      advance();
    }
    return s;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

Sexpr readOne(std::string_view text) {
  auto all = Reader(text).readAll();
  if (all.empty()) syntaxError(1, 1, "expression");
  if (all.size() > 1) syntaxError(all[1], "end of input");
  return std::move(all.front());
}

std::optional<std::int64_t> asInteger(const std::string& s) {
  if (s.empty()) return std::nullopt;
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return v;
}

bool isIdentifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_'))
    return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' ||
          c == '-'))
      return false;
  return true;
}

bool isKeyword(const std::string& s) {
  return s == "lam" || s == "app" || s == "app-lazy" || s == "inst";
}

TypePtr toType(const Sexpr& s) {
  if (s.atom) {
    if (!isIdentifier(s.text)) syntaxError(s, "type");
    return Type::base(s.text);
  }
  if (s.items.empty() || !s.items[0].atom) syntaxError(s, "type constructor");
  const std::string& head = s.items[0].text;
  if (head == "->") {
    if (s.items.size() < 3) syntaxError(s, "(-> type type ...)");
    TypePtr result = toType(s.items.back());
    for (std::size_t i = s.items.size() - 1; i-- > 1;)
      result = Type::arrow(toType(s.items[i]), result);
    return result;
  }
  if (!isIdentifier(head)) syntaxError(s.items[0], "type name");
  std::vector<TypePtr> args;
  for (std::size_t i = 1; i < s.items.size(); ++i) args.push_back(toType(s.items[i]));
  return Type::base(head, std::move(args));
}

class TermBuilder {
 public:
  explicit TermBuilder(const Plugin& plugin) : plugin_(plugin) {}

  TermPtr build(const Sexpr& s) {
    if (s.atom) return atom(s);
    if (s.items.empty()) syntaxError(s, "term");
    const Sexpr& head = s.items[0];
    if (head.atom && head.text == "lam") return lambda(s);
    if (head.atom && head.text == "inst") return inst(s);
    if (head.atom && (head.text == "app" || head.text == "app-lazy")) {
      bool lazy = head.text == "app-lazy";
      if (s.items.size() < 3 || (lazy && s.items.size() != 3))
        syntaxError(s, lazy ? "(app-lazy term term)" : "(app term term ...)");
      TermPtr t = build(s.items[1]);
      for (std::size_t i = 2; i < s.items.size(); ++i)
        t = Term::app(t, build(s.items[i]), lazy);
      return t;
    }
    TermPtr t = build(head);
    for (std::size_t i = 1; i < s.items.size(); ++i) t = Term::app(t, build(s.items[i]));
    return t;
  }

 private:
  TermPtr atom(const Sexpr& s) {
    if (asInteger(s.text)) return Term::constant(s.text);
    if (!isIdentifier(s.text) || isKeyword(s.text)) syntaxError(s, "identifier");
    for (auto it = bound_.rbegin(); it != bound_.rend(); ++it)
      if (*it == s.text) return Term::var(s.text);
    if (isConstantName(plugin_, s.text)) return Term::constant(s.text);
    return Term::var(s.text);
  }

  TermPtr lambda(const Sexpr& s) {
    if (s.items.size() != 3) syntaxError(s, "(lam (ident type) term)");
    const Sexpr& binder = s.items[1];
    if (binder.atom || binder.items.size() != 2 || !binder.items[0].atom ||
        !isIdentifier(binder.items[0].text) || isKeyword(binder.items[0].text))
      syntaxError(binder, "(ident type)");
    const std::string& name = binder.items[0].text;
    TypePtr ty = toType(binder.items[1]);
    bound_.push_back(name);
    TermPtr body = build(s.items[2]);
    bound_.pop_back();
    return Term::lam(name, ty, body);
  }

  TermPtr inst(const Sexpr& s) {
    if (s.items.size() < 2 || !s.items[1].atom || !isIdentifier(s.items[1].text))
      syntaxError(s, "(inst constant type ...)");
    std::vector<TypePtr> args;
    for (std::size_t i = 2; i < s.items.size(); ++i) args.push_back(toType(s.items[i]));
    return Term::constant(s.items[1].text, std::move(args));
  }

  const Plugin& plugin_;
  std::vector<std::string> bound_;
};

GroupPtr toGroup(const Sexpr& s, const Plugin& plugin) {
  std::string name;
  if (s.atom) {
    name = s.text;
  } else if (s.items.size() == 2 && s.items[0].atom && s.items[0].text == "mapGroup") {
    name = "mapGroup(" + toGroup(s.items[1], plugin)->name + ")";
  } else {
    syntaxError(s, "group name");
  }
  if (GroupPtr g = plugin.groupByName(name)) return g;
  syntaxError(s, "known group name, found " + name);
}

Value toValue(const Sexpr& s, const Plugin& plugin);

Key toKeyLiteral(const Sexpr& s, const Plugin& plugin) {
  Value v = toValue(s, plugin);
  try {
    return toKey(v);
  } catch (const Error&) {
    syntaxError(s, "Int or (pair Int Int) element");
  }
}

Value toValue(const Sexpr& s, const Plugin& plugin) {
  if (s.atom) {
    if (auto n = asInteger(s.text)) return Value(*n);
    return Value::group(toGroup(s, plugin));
  }
  if (s.items.empty() || !s.items[0].atom) syntaxError(s, "value literal");
  const std::string& head = s.items[0].text;
  if (head == "bag") {
    BagCounts counts;
    for (std::size_t i = 1; i < s.items.size(); ++i) {
      const Sexpr& e = s.items[i];
      if (!e.atom && !e.items.empty() && e.items[0].atom && e.items[0].text == "*") {
        if (e.items.size() != 3 || !e.items[2].atom || !asInteger(e.items[2].text))
          syntaxError(e, "(* element multiplicity)");
        counts[toKeyLiteral(e.items[1], plugin)] += *asInteger(e.items[2].text);
      } else {
        counts[toKeyLiteral(e, plugin)] += 1;
      }
    }
    return Value::bag(std::move(counts));
  }
  if (head == "map") {
    MapEntries entries;
    for (std::size_t i = 1; i < s.items.size(); ++i) {
      const Sexpr& e = s.items[i];
      if (e.atom || e.items.size() != 2) syntaxError(e, "(key value)");
      entries[toKeyLiteral(e.items[0], plugin)] = toValue(e.items[1], plugin);
    }
    return Value::map(std::move(entries));
  }
  if (head == "pair") {
    if (s.items.size() != 3) syntaxError(s, "(pair value value)");
    return Value::pair(toValue(s.items[1], plugin), toValue(s.items[2], plugin));
  }
  if (head == "replace") {
    if (s.items.size() != 2) syntaxError(s, "(replace value)");
    return Value::replace(toValue(s.items[1], plugin));
  }
  if (head == "groupchange") {
    if (s.items.size() != 3) syntaxError(s, "(groupchange group value)");
    return Value::groupChange(toGroup(s.items[1], plugin), toValue(s.items[2], plugin));
  }
  if (head == "mapGroup") return Value::group(toGroup(s, plugin));
  syntaxError(s.items[0], "bag, map, pair, replace or groupchange");
}

void prettyInto(std::string& out, const Term& t);

std::string prettyStr(const Term& t) {
  std::string s;
  prettyInto(s, t);
  return s;
}

void prettyInto(std::string& out, const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Const:
      if (t.typeArgs().empty()) {
        out += t.name();
      } else {
        out += "(inst " + t.name();
        for (const auto& a : t.typeArgs()) out += " " + typeToSexpr(*a);
        out += ")";
      }
      return;
    case Term::Kind::Var:
      out += t.name();
      return;
    case Term::Kind::Lam:
      out += "(lam (" + t.name() + " " + typeToSexpr(*t.paramType()) + ") ";
      prettyInto(out, *t.body());
      out += ")";
      return;
    case Term::Kind::App: {
      Spine sp = unspine(std::make_shared<const Term>(t));
      std::vector<std::string> items{prettyStr(*sp.head)};
      auto collapse = [&] {
        if (items.size() == 1) return items[0];
        std::string s = "(";
        for (std::size_t i = 0; i < items.size(); ++i) s += (i ? " " : "") + items[i];
        return s + ")";
      };
      for (std::size_t i = 0; i < sp.args.size(); ++i) {
        if (sp.deferred[i]) {
          items = {"(app-lazy " + collapse() + " " + prettyStr(*sp.args[i]) + ")"};
        } else {
          items.push_back(prettyStr(*sp.args[i]));
        }
      }
      out += collapse();
      return;
    }
  }
}

}  // namespace

TermPtr parseTerm(std::string_view text, const Plugin& plugin) {
  return TermBuilder(plugin).build(readOne(text));
}

TypePtr parseType(std::string_view text) { return toType(readOne(text)); }

Value parseValue(std::string_view text, const Plugin& plugin) {
  return toValue(readOne(text), plugin);
}

std::string pretty(const Term& t) { return prettyStr(t); }

}  // namespace ilc
