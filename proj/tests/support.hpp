#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "ilc/bench.hpp"
#include "ilc/collections.hpp"
#include "ilc/plugin.hpp"
#include "ilc/term.hpp"
#include "ilc/type.hpp"
#include "ilc/value.hpp"

namespace ilc::testing {

const Plugin& P();

std::string readFile(const std::filesystem::path& path);
/// Every *.lam program in the corpus directory, sorted by name.
std::vector<std::filesystem::path> corpusFiles();
TermPtr loadCorpus(const std::string& name);

TermPtr term(const std::string& text);
TypePtr type(const std::string& text);
Value value(const std::string& text);

struct Trial {
  Value input;
  Value change;
};
/// Histogram-shaped domains use the benchmark generators, everything else
/// the generic ones. `size` is the input size.
Trial makeTrial(const Type& domain, std::int64_t size, bench::Rng& rng);

/// v ⊕ dv via the erased ⊕ term at `t`.
Value oplusAt(const Type& t, const Value& v, const Value& dv);

/// f a ⊕ ⟦f x⟧^Δ (x = a) (dx = da): the differential-semantics side.
Value oracleUpdate(const TermPtr& program, const Value& input, const Value& change);

// Plain C++ models, independent of the evaluator.
using Multiset = std::map<std::int64_t, std::int64_t>;
Multiset toMultiset(const Value& bag);
/// Word count over a document map: word -> total multiplicity, zeros dropped.
std::map<std::int64_t, std::int64_t> wordCount(const Value& docs);
std::map<std::int64_t, std::int64_t> toIntMap(const Value& map);

/// Walks a value checking that no zero multiplicity or zero map entry is
/// stored.
bool isCanonical(const Value& v);

}  // namespace ilc::testing
