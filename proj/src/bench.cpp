#include "ilc/bench.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "ilc/analysis.hpp"
#include "ilc/change.hpp"
#include "ilc/collections.hpp"
#include "ilc/derive.hpp"
#include "ilc/error.hpp"
#include "ilc/eval.hpp"
#include "ilc/syntax.hpp"
#include "ilc/typecheck.hpp"

namespace ilc::bench {

const std::string& histogramSource() {
  static const std::string src = R"(; word count: document id -> bag of words, words modelled as Ints
(lam (input (Map Int (Bag Int)))
  ; reducePerKey
  ((inst foldMap Int (Bag Int) (Map Int Int))
    (inst bagGroup Int)
    ((inst mapGroup Int Int) intAdd)
    (lam (key Int) (lam (bag (Bag Int))
      ((inst singletonMap Int Int) key
        ; histogramReduce
        ((lam (k Int) ((inst foldBag Int Int) intAdd (lam (x Int) x))) key bag))))
    ; groupByKey
    ((inst foldBag (Pair Int Int) (Map Int (Bag Int)))
      ((inst mapGroup Int (Bag Int)) (inst bagGroup Int))
      (lam (kv (Pair Int Int))
        ((inst singletonMap Int (Bag Int)) ((inst fst Int Int) kv)
          ((inst singletonBag Int) ((inst snd Int Int) kv))))
      ; mapPerKey
      ((inst foldMap Int (Bag Int) (Bag (Pair Int Int)))
        (inst bagGroup Int)
        (inst bagGroup (Pair Int Int))
        ; histogramMap
        (lam (id Int)
          ((inst foldBag Int (Bag (Pair Int Int)))
            (inst bagGroup (Pair Int Int))
            (lam (n Int) ((inst singletonBag (Pair Int Int)) ((inst pair Int Int) n 1)))))
        input))))
)";
  return src;
}

namespace {

std::int64_t uniform(Rng& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

Value randomKey(const Type& t, Rng& rng) {
  if (t.isBase("Pair")) return Value::pair(uniform(rng, 0, 4), uniform(rng, 0, 4));
  return Value(uniform(rng, 0, 9));
}

/// A random, usually small, nonzero delta in the canonical group of `t`.
Value randomDelta(const Type& t, Rng& rng) {
  if (t.isBase("Int")) {
    std::int64_t d = 0;
    while (d == 0) d = uniform(rng, -3, 3);
    return Value(d);
  }
  if (t.isBase("Bag")) {
    BagCounts c;
    std::int64_t n = uniform(rng, 1, 2);
    for (std::int64_t i = 0; i < n; ++i)
      c[toKey(randomKey(*t.args()[0], rng))] += coin(rng, 0.5) ? 1 : -1;
    return Value::bag(std::move(c));
  }
  MapEntries e;
  e[toKey(randomKey(*t.args()[0], rng))] = randomDelta(*t.args()[1], rng);
  return Value::map(std::move(e));
}

}  // namespace

Value randomValue(const Plugin& plugin, const Type& t, Rng& rng, std::size_t size) {
  if (t.isArrow())
    throw Error(ErrorKind::TypeMismatch, "cannot generate values of type " + showType(t));
  plugin.checkBaseType(t);
  if (t.isBase("Int")) return Value(uniform(rng, -20, 20));
  if (t.isBase("Pair"))
    return Value::pair(randomValue(plugin, *t.args()[0], rng, size),
                       randomValue(plugin, *t.args()[1], rng, size));
  if (t.isBase("Bag")) {
    BagCounts c;
    const Type& elem = *t.args()[0];
    std::size_t n = static_cast<std::size_t>(uniform(rng, 0, static_cast<std::int64_t>(size)));
    for (std::size_t i = 0; i < n; ++i) {
      Key k = elem.isBase("Pair") ? Key::ofPair(uniform(rng, 0, 9), uniform(rng, 0, 9))
                                  : Key::ofInt(uniform(rng, 0, 99));
      c[k] += coin(rng, 0.9) ? 1 : -1;
    }
    return Value::bag(std::move(c));
  }
  if (t.isBase("Map")) {
    MapEntries e;
    const Type& key = *t.args()[0];
    std::size_t n = static_cast<std::size_t>(uniform(rng, 0, static_cast<std::int64_t>(size)));
    std::int64_t keyRange = std::max<std::int64_t>(99, static_cast<std::int64_t>(size));
    for (std::size_t i = 0; i < n; ++i) {
      Key k = key.isBase("Pair") ? Key::ofPair(uniform(rng, 0, 9), uniform(rng, 0, 9))
                                 : Key::ofInt(uniform(rng, 0, keyRange));
      e[k] = randomValue(plugin, *t.args()[1], rng, std::clamp<std::size_t>(size / 4, 1, 16));
    }
    return Value::map(std::move(e));
  }
  if (t.isBase("Group")) {
    if (GroupPtr g = collections::canonicalGroup(*t.args()[0])) return Value::group(g);
  }
  throw Error(ErrorKind::TypeMismatch, "cannot generate values of type " + showType(t));
}

Value randomChange(const Plugin& plugin, const Type& t, const Value& raw, Rng& rng) {
  Value v = force(raw);
  if (t.isBase("Int")) return Value(uniform(rng, -10, 10));
  if (t.isBase("Pair"))
    return Value::pair(randomChange(plugin, *t.args()[0], v.first(), rng),
                       randomChange(plugin, *t.args()[1], v.second(), rng));
  if (t.isBase("Bag") || t.isBase("Map")) {
    GroupPtr g = collections::canonicalGroup(t);
    std::size_t size = std::max<std::size_t>(
        4, t.isBase("Bag") ? v.bag().size() : v.map().size());
    if (!g || coin(rng, 0.2)) return Value::replace(randomValue(plugin, t, rng, size));
    if (t.isBase("Map") && !v.map().empty() && coin(rng, 0.5)) {
      // Touch an existing key.
      auto it = v.map().begin();
      std::advance(it, uniform(rng, 0, static_cast<std::int64_t>(v.map().size()) - 1));
      MapEntries e;
      e[it->first] = randomDelta(*t.args()[1], rng);
      return Value::groupChange(g, Value::map(std::move(e)));
    }
    return Value::groupChange(g, randomDelta(t, rng));
  }
  return Value::replace(v);
}

Value genInput(std::int64_t n, Rng& rng) {
  if (n < 1000 || n % 1000 != 0)
    throw Error(ErrorKind::InvalidSize,
                "input size must be a positive multiple of 1000, got " + std::to_string(n));
  std::int64_t bags = n / 1000;
  std::vector<BagCounts> contents(static_cast<std::size_t>(bags));
  for (std::int64_t i = 0; i < n; ++i) {
    std::int64_t word = uniform(rng, 1, 1000);
    std::int64_t bag = uniform(rng, 1, bags);
    contents[static_cast<std::size_t>(bag - 1)][Key::ofInt(word)] += 1;
  }
  MapEntries e;
  e.reserve(contents.size());
  for (std::int64_t k = 1; k <= bags; ++k)
    e.emplace(Key::ofInt(k), Value::bag(std::move(contents[static_cast<std::size_t>(k - 1)])));
  return Value::map(std::move(e));
}

Value genChange(const Value& input, Rng& rng) {
  const MapEntries& docs = input.map();
  if (docs.empty()) throw Error(ErrorKind::EmptyInput, "cannot change an empty input");
  std::vector<Key> keys;
  keys.reserve(docs.size());
  for (const auto& [k, v] : docs) keys.push_back(k);
  std::sort(keys.begin(), keys.end());

  auto positiveTotal = [](const BagCounts& b) {
    std::int64_t s = 0;
    for (const auto& [x, m] : b) s += std::max<std::int64_t>(m, 0);
    return s;
  };

  Key key;
  BagCounts delta;
  std::int64_t total = 0;
  for (const auto& [k, v] : docs) total += positiveTotal(v.bag());
  if (coin(rng, 0.5) && total > 0) {
    std::int64_t r = uniform(rng, 0, total - 1);
    for (const Key& k : keys) {
      const BagCounts& b = docs.at(k).bag();
      std::int64_t t = positiveTotal(b);
      if (r >= t) {
        r -= t;
        continue;
      }
      std::vector<std::pair<Key, std::int64_t>> elems(b.begin(), b.end());
      std::sort(elems.begin(), elems.end());
      for (const auto& [x, m] : elems) {
        if (m <= 0) continue;
        if (r < m) {
          key = k;
          delta[x] = -1;
          break;
        }
        r -= m;
      }
      break;
    }
  } else {
    key = keys[static_cast<std::size_t>(uniform(rng, 0, static_cast<std::int64_t>(keys.size()) - 1))];
    delta[Key::ofInt(uniform(rng, 1, 1000))] = 1;
  }
  MapEntries e;
  e.emplace(key, Value::bag(std::move(delta)));
  return Value::groupChange(collections::mapGroup(collections::bagGroup()),
                            Value::map(std::move(e)));
}

Incrementalized prepare(const Plugin& plugin, const TermPtr& program, PrepareOptions options) {
  Incrementalized p;
  p.program = renameAvoidingD(program);
  p.type = typecheck(plugin, *p.program);
  if (!p.type->isArrow() || !p.type->domain()->isFirstOrder() ||
      !p.type->codomain()->isFirstOrder())
    throw Error(ErrorKind::TypeMismatch,
                "expected a first-order function, got " + showType(*p.type));
  p.derived = derive(p.program, DeriveConfig{&plugin, options.useDerivativeTable});
  if (options.specialize) p.derived = specialize(p.derived, plugin.specializations());
  p.f = eval(plugin, p.program);
  p.df = eval(plugin, p.derived);
  p.oplusOut = eval(plugin, erasedOplusTerm(plugin, *p.type->codomain()));
  return p;
}

IncrementalCheck checkIncremental(const Incrementalized& p, const Value& input, const Value& change) {
  IncrementalCheck out;
  try {
    out.lhs = force(apply(p.f, oplus(input, change)));
    Value base = apply(p.f, input);
    Value dv = apply(p.df, {input, change});
    out.rhs = force(apply(p.oplusOut, {base, dv}));
    out.ok = valueEquals(out.lhs, out.rhs);
    if (!out.ok)
      out.diagnostic = "f (a + da) = " + showValue(out.lhs) +
                       " but f a + f' a da = " + showValue(out.rhs);
  } catch (const Error& e) {
    out.ok = false;
    out.diagnostic = e.what();
  }
  return out;
}

bool verifyIncremental(const Incrementalized& p, const Value& input, const Value& change) {
  return checkIncremental(p, input, change).ok;
}

std::vector<std::int64_t> defaultSizes() {
  std::vector<std::int64_t> s;
  for (int k = 0; k <= 9; ++k) s.push_back(std::int64_t{1000} << k);
  return s;
}

void validate(const BenchConfig& c) {
  if (c.sizes.empty()) throw Error(ErrorKind::InvalidSize, "no sizes given");
  for (std::size_t i = 0; i < c.sizes.size(); ++i) {
    if (c.sizes[i] < 1000 || c.sizes[i] % 1000 != 0)
      throw Error(ErrorKind::InvalidSize,
                  "size " + std::to_string(c.sizes[i]) + " is not a positive multiple of 1000");
    if (i > 0 && c.sizes[i] <= c.sizes[i - 1])
      throw Error(ErrorKind::InvalidSize, "sizes must be strictly ascending");
  }
  if (c.measuredIterations < 2)
    throw Error(ErrorKind::InvalidSize, "need at least 2 measured iterations");
  if (c.warmupIterations < 0) throw Error(ErrorKind::InvalidSize, "negative warmup");
  if (!(c.confidence > 0 && c.confidence < 1))
    throw Error(ErrorKind::InvalidSize, "confidence must lie in (0, 1)");
}

Sample summarize(const std::vector<double>& xs, double confidence) {
  Sample s;
  if (xs.empty()) return s;
  double n = static_cast<double>(xs.size());
  for (double x : xs) s.mean += x;
  s.mean /= n;
  std::vector<double> sorted = xs;
  std::sort(sorted.begin(), sorted.end());
  std::size_t mid = sorted.size() / 2;
  s.median = sorted.size() % 2 ? sorted[mid] : (sorted[mid - 1] + sorted[mid]) / 2;
  if (xs.size() < 2) return s;
  double var = 0;
  for (double x : xs) var += (x - s.mean) * (x - s.mean);
  var /= n - 1;
  boost::math::students_t dist(n - 1);
  double t = boost::math::quantile(boost::math::complement(dist, (1 - confidence) / 2));
  s.ci = t * std::sqrt(var / n);
  return s;
}

namespace {

using Clock = std::chrono::steady_clock;

double msSince(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

}  // namespace

std::vector<TrialResult> runBenchmark(const BenchConfig& config,
                                      const std::function<void(const TrialResult&)>& progress) {
  const Plugin& plugin = collections::plugin();
  return runBenchmark(prepare(plugin, parseTerm(histogramSource(), plugin)), config, progress);
}

std::vector<TrialResult> runBenchmark(const Incrementalized& p, const BenchConfig& config,
                                      const std::function<void(const TrialResult&)>& progress) {
  validate(config);
  std::vector<TrialResult> results;
  for (std::int64_t n : config.sizes) {
    Rng rng(config.seed ^ (static_cast<std::uint64_t>(n) * 0x9E3779B97F4A7C15ULL));
    Value input = genInput(n, rng);
    Value change = genChange(input, rng);

    TrialResult r;
    r.size = n;
    r.verified = verifyIncremental(p, input, change);
    if (!r.verified) {
      r.recomputeMean = r.incrementalMean = std::numeric_limits<double>::quiet_NaN();
      results.push_back(r);
      if (progress) progress(r);
      continue;
    }

    Value output = apply(p.f, input);
    Value updated = oplus(input, change);

    auto incremental = [&] {
      Value dv = apply(p.df, {input, change});
      return apply(p.oplusOut, {output, dv});
    };

    for (int i = 0; i < std::min(config.warmupIterations, 3); ++i) apply(p.f, updated);
    std::vector<double> recompute;
    for (int i = 0; i < config.measuredIterations; ++i) {
      auto start = Clock::now();
      Value v = apply(p.f, updated);
      recompute.push_back(msSince(start));
    }

    auto warmStart = Clock::now();
    for (int i = 0; i < config.warmupIterations; ++i) incremental();
    double perRun = config.warmupIterations > 0 ? msSince(warmStart) / config.warmupIterations
                                                : 0.0;
    // Time batches so each sample is well above clock resolution.
    int batch = perRun > 0 ? std::clamp(static_cast<int>(0.5 / perRun), 1, 1000) : 1;
    std::vector<double> inc;
    for (int i = 0; i < config.measuredIterations; ++i) {
      auto start = Clock::now();
      for (int j = 0; j < batch; ++j) incremental();
      inc.push_back(msSince(start) / batch);
    }

    Sample rs = summarize(recompute, config.confidence);
    Sample is = summarize(inc, config.confidence);
    r.recomputeMean = rs.mean;
    r.recomputeCi = rs.ci;
    r.recomputeMedian = rs.median;
    r.incrementalMean = is.mean;
    r.incrementalCi = is.ci;
    r.incrementalMedian = is.median;
    r.speedup = is.mean > 0 ? rs.mean / is.mean : 0;
    results.push_back(r);
    if (progress) progress(r);
  }
  return results;
}

SlopeFit slopeFit(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3)
    throw Error(ErrorKind::DegenerateInput, "slope fit needs at least 3 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (const auto& [size, time] : points) {
    if (!(size > 0) || !(time > 0))
      throw Error(ErrorKind::DegenerateInput, "sizes and times must be positive");
    double x = std::log(size), y = std::log(time);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  double n = static_cast<double>(points.size());
  double vx = sxx - sx * sx / n;
  double vy = syy - sy * sy / n;
  double cxy = sxy - sx * sy / n;
  if (vx <= 0) throw Error(ErrorKind::DegenerateInput, "all sizes are equal");
  SlopeFit fit;
  fit.slope = cxy / vx;
  fit.r2 = vy > 0 ? (cxy * cxy) / (vx * vy) : 1.0;
  return fit;
}

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void writeCsv(std::ostream& out, const std::vector<TrialResult>& results) {
  out << "size,recompute_ms_mean,recompute_ms_ci,incremental_ms_mean,incremental_ms_ci,"
         "speedup,verified\n";
  for (const auto& r : results)
    out << r.size << ',' << num(r.recomputeMean) << ',' << num(r.recomputeCi) << ','
        << num(r.incrementalMean) << ',' << num(r.incrementalCi) << ',' << num(r.speedup)
        << ',' << (r.verified ? "true" : "false") << '\n';
}

std::vector<TrialResult> readCsv(std::istream& in) {
  std::vector<TrialResult> out;
  std::string line;
  if (!std::getline(in, line)) return out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 7)
      throw Error(ErrorKind::SyntaxError, "CSV row needs 7 columns: " + line);
    TrialResult r;
    try {
      r.size = std::stoll(cells[0]);
      r.recomputeMean = std::stod(cells[1]);
      r.recomputeCi = std::stod(cells[2]);
      r.incrementalMean = std::stod(cells[3]);
      r.incrementalCi = std::stod(cells[4]);
      r.speedup = std::stod(cells[5]);
    } catch (const std::exception&) {
      throw Error(ErrorKind::SyntaxError, "bad CSV number in: " + line);
    }
    r.verified = cells[6] == "true";
    out.push_back(r);
  }
  return out;
}

}  // namespace ilc::bench
