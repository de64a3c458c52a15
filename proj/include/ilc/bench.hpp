#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "ilc/plugin.hpp"
#include "ilc/term.hpp"
#include "ilc/type.hpp"
#include "ilc/value.hpp"

namespace ilc::bench {

using Rng = std::mt19937_64;

/// Source of the word-count histogram, Map Int (Bag Int) -> Map Int Int.
const std::string& histogramSource();

// ---- generators ----

/// Random inhabitant of a first-order type. `size` bounds collection sizes.
Value randomValue(const Plugin& plugin, const Type& t, Rng& rng, std::size_t size = 8);
/// Random valid change for `v` at type `t`: mostly group changes, sometimes
/// Replace.
Value randomChange(const Plugin& plugin, const Type& t, const Value& v, Rng& rng);

/// n numbers uniform in [1,1000] spread uniformly over bags keyed 1..n/1000.
Value genInput(std::int64_t n, Rng& rng);
/// Deletes one random existing occurrence or inserts a random number under
/// a random existing key, with equal probability.
Value genChange(const Value& input, Rng& rng);

// ---- checking f (a ⊕ da) == f a ⊕ f' a da ----

/// A program together with its derivative, both evaluated once.
struct Incrementalized {
  TermPtr program;
  TypePtr type;
  TermPtr derived;
  Value f;
  Value df;
  /// Erased ⊕ at the output type, evaluated.
  Value oplusOut;
};

struct PrepareOptions {
  bool specialize = true;
  bool useDerivativeTable = true;
};

/// Typechecks a closed program of first-order function type, derives it and
/// evaluates both. Throws TypeMismatch for non-function programs.
Incrementalized prepare(const Plugin& plugin, const TermPtr& program,
                        PrepareOptions options = {});

struct IncrementalCheck {
  bool ok = false;
  Value lhs;  // f (a ⊕ da)
  Value rhs;  // f a ⊕ f' a da
  std::string diagnostic;
};

/// f (a ⊕ da) == f a ⊕ Derive(f) a da, exact canonical equality. Evaluation
/// errors are reported as a failed outcome.
IncrementalCheck checkIncremental(const Incrementalized& p, const Value& input, const Value& change);
bool verifyIncremental(const Incrementalized& p, const Value& input, const Value& change);

// ---- timing ----

struct BenchConfig {
  std::vector<std::int64_t> sizes;
  int warmupIterations = 1000;
  int measuredIterations = 50;
  std::uint64_t seed = 42;
  double confidence = 0.99;
};

/// 1000·2^k for k = 0..9.
std::vector<std::int64_t> defaultSizes();
/// Throws InvalidSize unless sizes are ascending multiples of 1000.
void validate(const BenchConfig& config);

struct TrialResult {
  std::int64_t size = 0;
  double recomputeMean = 0;
  double recomputeCi = 0;
  double incrementalMean = 0;
  double incrementalCi = 0;
  double speedup = 0;
  bool verified = false;
  double recomputeMedian = 0;
  double incrementalMedian = 0;
};

struct Sample {
  double mean = 0;
  double ci = 0;
  double median = 0;
};

/// Mean, t-interval half-width at `confidence`, and median.
Sample summarize(const std::vector<double>& xs, double confidence);

/// Runs the histogram benchmark. `progress` is called after each size.
std::vector<TrialResult> runBenchmark(
    const BenchConfig& config, const std::function<void(const TrialResult&)>& progress = {});
/// Same, for any prepared program over Map Int (Bag Int).
std::vector<TrialResult> runBenchmark(
    const Incrementalized& program, const BenchConfig& config,
    const std::function<void(const TrialResult&)>& progress = {});

struct SlopeFit {
  double slope = 0;
  double r2 = 0;
};

/// Least squares on (log size, log time). DegenerateInput on fewer than 3
/// points or a non-positive time.
SlopeFit slopeFit(const std::vector<std::pair<double, double>>& points);

void writeCsv(std::ostream& out, const std::vector<TrialResult>& results);
std::vector<TrialResult> readCsv(std::istream& in);

}  // namespace ilc::bench
