#include "support.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "ilc/change.hpp"
#include "ilc/derive.hpp"
#include "ilc/eval.hpp"
#include "ilc/syntax.hpp"

#ifndef ILC_CORPUS_DIR
#error "ILC_CORPUS_DIR must be defined"
#endif

namespace ilc::testing {

const Plugin& P() { return collections::plugin(); }

std::string readFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::filesystem::path> corpusFiles() {
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(ILC_CORPUS_DIR)) {
    const auto& p = e.path();
    if (p.extension() != ".lam") continue;
    if (p.stem().extension() == ".d") continue;  // derived output
    out.push_back(p);
  }
  std::sort(out.begin(), out.end());
  return out;
}

TermPtr loadCorpus(const std::string& name) {
  return parseTerm(readFile(std::filesystem::path(ILC_CORPUS_DIR) / (name + ".lam")), P());
}

TermPtr term(const std::string& text) { return parseTerm(text, P()); }
TypePtr type(const std::string& text) { return parseType(text); }
Value value(const std::string& text) { return parseValue(text, P()); }

Trial makeTrial(const Type& domain, std::int64_t size, bench::Rng& rng) {
  static const TypePtr docs = types::map(types::intT(), types::bag(types::intT()));
  Trial t;
  if (typeEquals(domain, *docs)) {
    t.input = bench::genInput(size, rng);
    t.change = bench::genChange(t.input, rng);
  } else {
    t.input = bench::randomValue(P(), domain, rng, static_cast<std::size_t>(size));
    t.change = bench::randomChange(P(), domain, t.input, rng);
  }
  return t;
}

Value oplusAt(const Type& t, const Value& v, const Value& dv) {
  return force(apply(eval(P(), erasedOplusTerm(P(), t)), {v, dv}));
}

Value oracleUpdate(const TermPtr& program, const Value& input, const Value& change) {
  TermPtr applied = Term::app(program, Term::var("arg"));
  Environment env = Environment{}.extend("arg", input);
  ChangeEnvironment denv = ChangeEnvironment{}.extend("arg", change);
  Value out = force(eval(P(), applied, env));
  Value dv = force(changeEval(P(), applied, env, denv));
  return force(oplus(out, dv));
}

Multiset toMultiset(const Value& bag) {
  Multiset out;
  for (const auto& [k, m] : bag.bag()) out[k.first] += m;
  return out;
}

std::map<std::int64_t, std::int64_t> wordCount(const Value& docs) {
  std::map<std::int64_t, std::int64_t> out;
  for (const auto& [doc, bag] : docs.map())
    for (const auto& [w, m] : bag.bag()) out[w.first] += m;
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

std::map<std::int64_t, std::int64_t> toIntMap(const Value& map) {
  std::map<std::int64_t, std::int64_t> out;
  for (const auto& [k, v] : map.map()) out[k.first] = v.asInt();
  return out;
}

bool isCanonical(const Value& raw) {
  Value v = force(raw);
  switch (v.kind()) {
    case Value::Kind::Bag:
      return std::none_of(v.bag().begin(), v.bag().end(),
                          [](const auto& kv) { return kv.second == 0; });
    case Value::Kind::Map:
      for (const auto& [k, x] : v.map())
        if (isZeroPayload(x) || !isCanonical(x)) return false;
      return true;
    case Value::Kind::Pair: return isCanonical(v.first()) && isCanonical(v.second());
    default: return true;
  }
}

}  // namespace ilc::testing
