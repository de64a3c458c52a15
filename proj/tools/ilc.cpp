// ilc: typecheck, derive, evaluate, verify and benchmark λ-programs.
//
// Exit codes: 0 success, 1 type or verification failure (and any other
// error raised while processing the program), 2 usage error.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ilc/analysis.hpp"
#include "ilc/bench.hpp"
#include "ilc/change.hpp"
#include "ilc/collections.hpp"
#include "ilc/derive.hpp"
#include "ilc/error.hpp"
#include "ilc/eval.hpp"
#include "ilc/syntax.hpp"
#include "ilc/typecheck.hpp"

namespace {

using namespace ilc;

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string readFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const Plugin& P() { return collections::plugin(); }

TermPtr load(const std::string& path) { return parseTerm(readFile(path), P()); }

/// Parses literals and applies them one by one, checking each against the
/// parameter type.
std::pair<Value, TypePtr> applyArgs(Value f, TypePtr type, const std::vector<std::string>& args,
                                    std::vector<Value>* parsed = nullptr) {
  for (const auto& text : args) {
    if (!type->isArrow())
      throw Error(ErrorKind::NotAFunction, "too many arguments for " + showType(*type));
    Value v = parseValue(text, P());
    if (!valueHasType(v, *type->domain()))
      throw Error(ErrorKind::TypeMismatch,
                  "argument " + text + " is not a " + showType(*type->domain()));
    if (parsed) parsed->push_back(v);
    f = apply(f, v);
    type = type->codomain();
  }
  return {force(f), type};
}

int cmdCheck(const std::string& file) {
  TermPtr t = load(file);
  std::cout << showType(*typecheck(P(), *t)) << "\n";
  return kOk;
}

int cmdDerive(const std::string& file, const std::string& out, bool noSpecialize) {
  TermPtr t = renameAvoidingD(load(file));
  typecheck(P(), *t);
  TermPtr d = derive(t, DeriveConfig{&P(), true});
  if (!noSpecialize) d = specialize(d, P().specializations());
  std::string text = pretty(*d) + "\n";
  if (out.empty()) {
    std::cout << text;
  } else {
    std::ofstream o(out);
    if (!o) throw UsageError("cannot write " + out);
    o << text;
  }
  std::cerr << "program size " << termSize(*t) << " nodes, derivative size " << termSize(*d)
            << " nodes\n";
  return kOk;
}

int cmdEval(const std::string& file, const std::vector<std::string>& args) {
  TermPtr t = load(file);
  TypePtr ty = typecheck(P(), *t);
  auto [v, rest] = applyArgs(eval(P(), t), ty, args);
  if (rest->isArrow())
    std::cout << showValue(v) << " : " << showType(*rest) << "\n";
  else
    std::cout << showValue(v) << "\n";
  return kOk;
}

int cmdDiffEval(const std::string& file, const std::vector<std::string>& args,
                const std::vector<std::string>& changes, bool noSpecialize, bool oracle,
                bool countForces) {
  if (args.size() != changes.size())
    throw UsageError("need one --change per --arg");
  TermPtr t = renameAvoidingD(load(file));
  TypePtr ty = typecheck(P(), *t);
  std::vector<Value> values;
  auto [output, outType] = applyArgs(eval(P(), t), ty, args, &values);
  if (outType->isArrow()) throw UsageError("program must be fully applied");

  std::vector<Value> dvs;
  TypePtr cur = ty;
  for (const auto& text : changes) {
    Value dv = parseValue(text, P());
    std::size_t i = dvs.size();
    ChangeStructure cs = changeStructureFor(P(), cur->domain());
    if (!cs.member(values[i], dv))
      throw Error(ErrorKind::ChangeTypeMismatch,
                  text + " is not a change for " + showValue(values[i]));
    dvs.push_back(dv);
    cur = cur->codomain();
  }

  EvalStats stats;
  Value change;
  {
    ScopedEvalStats scope(stats);
    if (oracle) {
      Environment env;
      ChangeEnvironment denv;
      TermPtr applied = t;
      for (std::size_t i = 0; i < values.size(); ++i) {
        std::string x = "x_arg" + std::to_string(i);
        env = env.extend(x, values[i]);
        denv = denv.extend(x, dvs[i]);
        applied = Term::app(applied, Term::var(x));
      }
      change = force(changeEval(P(), applied, env, denv));
    } else {
      TermPtr d = derive(t, DeriveConfig{&P(), true});
      if (!noSpecialize) d = specialize(d, P().specializations());
      change = eval(P(), d);
      for (std::size_t i = 0; i < values.size(); ++i)
        change = apply(change, {values[i], dvs[i]});
      change = force(change);
    }
  }
  Value updated = force(apply(eval(P(), erasedOplusTerm(P(), *outType)), {output, change}));
  std::cout << "output  " << showValue(output) << "\n"
            << "change  " << showValue(change) << "\n"
            << "updated " << showValue(updated) << "\n";
  if (countForces) std::cout << "forces  " << stats.forces << "\n";
  return kOk;
}

int cmdVerify(const std::string& file, int trials, std::uint64_t seed, std::int64_t size,
              bool noSpecialize, bool countForces) {
  TermPtr t = load(file);
  bench::Incrementalized p = bench::prepare(P(), t, {!noSpecialize, true});
  const Type& dom = *p.type->domain();
  bool histogramShaped = typeEquals(dom, *types::map(types::intT(), types::bag(types::intT())));
  bench::Rng rng(seed);
  int ok = 0;
  std::string firstFailure;
  EvalStats stats;
  for (int i = 0; i < trials; ++i) {
    Value input, change;
    if (histogramShaped) {
      input = bench::genInput(size, rng);
      change = bench::genChange(input, rng);
    } else {
      input = bench::randomValue(P(), dom, rng, static_cast<std::size_t>(size));
      change = bench::randomChange(P(), dom, input, rng);
    }
    bench::IncrementalCheck r;
    {
      ScopedEvalStats scope(stats);
      r = bench::checkIncremental(p, input, change);
    }
    if (r.ok) {
      ++ok;
    } else if (firstFailure.empty()) {
      firstFailure = "trial " + std::to_string(i) + ": input " + showValue(input) +
                     ", change " + showValue(change) + ": " + r.diagnostic;
    }
  }
  std::cout << ok << "/" << trials << (ok == trials ? " OK" : " FAILED") << "\n";
  if (countForces) std::cout << "forces " << stats.forces << "\n";
  if (!firstFailure.empty()) std::cerr << firstFailure << "\n";
  return ok == trials ? kOk : kFailure;
}

std::vector<std::int64_t> parseSizes(const std::string& text) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoll(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("bad size: " + item);
    }
  }
  return out;
}

int cmdBench(const std::string& sizes, std::uint64_t seed, int warmup, int iters,
             const std::string& out) {
  bench::BenchConfig cfg;
  cfg.sizes = sizes.empty() ? bench::defaultSizes() : parseSizes(sizes);
  cfg.seed = seed;
  cfg.warmupIterations = warmup;
  cfg.measuredIterations = iters;
  auto results = bench::runBenchmark(cfg, [](const bench::TrialResult& r) {
    std::fprintf(stderr, "%8lld  recompute %10.4f ms  incremental %8.5f ms  speedup %9.1f%s\n",
                 static_cast<long long>(r.size), r.recomputeMean, r.incrementalMean,
                 r.speedup, r.verified ? "" : "  NOT VERIFIED");
  });
  if (out.empty()) {
    bench::writeCsv(std::cout, results);
  } else {
    std::ofstream o(out);
    if (!o) throw UsageError("cannot write " + out);
    bench::writeCsv(o, results);
  }
  bool allVerified = true;
  std::vector<std::pair<double, double>> rec, inc;
  for (const auto& r : results) {
    allVerified &= r.verified;
    if (r.verified) {
      rec.emplace_back(static_cast<double>(r.size), r.recomputeMean);
      inc.emplace_back(static_cast<double>(r.size), r.incrementalMean);
    }
  }
  if (rec.size() >= 3) {
    auto fr = bench::slopeFit(rec);
    auto fi = bench::slopeFit(inc);
    std::fprintf(stderr, "log-log slope: recompute %.3f (r2 %.3f), incremental %.3f (r2 %.3f)\n",
                 fr.slope, fr.r2, fi.slope, fi.r2);
  }
  return allVerified ? kOk : kFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Static incrementalization of simply-typed λ-programs"};
  app.require_subcommand(1);

  std::string file, out, sizes;
  std::vector<std::string> args, changes;
  bool noSpecialize = false, countForces = false, oracle = false;
  int trials = 100, warmup = 1000, iters = 50;
  std::uint64_t seed = 42;
  std::int64_t size = 1000;

  auto* check = app.add_subcommand("check", "typecheck a program and print its type");
  check->add_option("file", file)->required();

  auto* deriveCmd = app.add_subcommand("derive", "write the derivative of a program");
  deriveCmd->add_option("file", file)->required();
  deriveCmd->add_option("-o,--output", out, "output file (default: stdout)");
  deriveCmd->add_flag("--no-specialize", noSpecialize, "keep general derivatives");

  auto* evalCmd = app.add_subcommand("eval", "apply a program to value literals");
  evalCmd->add_option("file", file)->required();
  evalCmd->add_option("args", args, "argument literals");

  auto* diff = app.add_subcommand("diff-eval", "compute the output change for input changes");
  diff->add_option("file", file)->required();
  diff->add_option("-a,--arg", args, "argument literal")->required();
  diff->add_option("-c,--change", changes, "change literal, one per argument")->required();
  diff->add_flag("--no-specialize", noSpecialize, "keep general derivatives");
  diff->add_flag("--oracle", oracle, "use differential evaluation instead of Derive");
  diff->add_flag("--count-forces", countForces, "print how many deferred arguments were forced");

  auto* verify = app.add_subcommand("verify", "check f (a + da) = f a + f' a da on random inputs");
  verify->add_option("file", file)->required();
  verify->add_option("--trials", trials)->check(CLI::PositiveNumber);
  verify->add_option("--seed", seed);
  verify->add_option("--size", size, "input size")->check(CLI::PositiveNumber);
  verify->add_flag("--no-specialize", noSpecialize, "keep general derivatives");
  verify->add_flag("--count-forces", countForces, "print how many deferred arguments were forced");

  auto* benchCmd = app.add_subcommand("bench", "time recomputation against incremental update");
  benchCmd->add_option("--sizes", sizes, "comma-separated input sizes (multiples of 1000)");
  benchCmd->add_option("--seed", seed);
  benchCmd->add_option("--warmup", warmup)->check(CLI::NonNegativeNumber);
  benchCmd->add_option("--iters", iters)->check(CLI::Range(2, 1000000));
  benchCmd->add_option("--out", out, "CSV file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*check) return cmdCheck(file);
    if (*deriveCmd) return cmdDerive(file, out, noSpecialize);
    if (*evalCmd) return cmdEval(file, args);
    if (*diff) return cmdDiffEval(file, args, changes, noSpecialize, oracle, countForces);
    if (*verify) return cmdVerify(file, trials, seed, size, noSpecialize, countForces);
    if (*benchCmd) return cmdBench(sizes, seed, warmup, iters, out);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::InvalidSize ? kUsage : kFailure;
  }
  return kUsage;
}
