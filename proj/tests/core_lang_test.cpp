#include <gtest/gtest.h>

#include "ilc/bench.hpp"
#include "ilc/error.hpp"
#include "ilc/eval.hpp"
#include "ilc/syntax.hpp"
#include "ilc/typecheck.hpp"
#include "support.hpp"

using namespace ilc;
using namespace ilc::testing;

namespace {

ErrorKind kindOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::VerificationFailed;
}

std::string typeOf(const std::string& text) { return showType(*typecheck(P(), *term(text))); }

}  // namespace

TEST(Typecheck, Identity) { EXPECT_EQ(typeOf("(lam (x Int) x)"), "Int -> Int"); }

TEST(Typecheck, Histogram) {
  EXPECT_EQ(showType(*typecheck(P(), *loadCorpus("histogram"))),
            "Map Int (Bag Int) -> Map Int Int");
}

TEST(Typecheck, LiteralAppliedToLiteral) {
  TermPtr five = Term::constant("5");
  EXPECT_EQ(kindOf([&] { typecheck(P(), *Term::app(five, five)); }), ErrorKind::NotAFunction);
}

TEST(Typecheck, Errors) {
  EXPECT_EQ(kindOf([] { typecheck(P(), *term("(lam (x Int) y)")); }),
            ErrorKind::UnboundVariable);
  EXPECT_EQ(kindOf([] { typecheck(P(), *term("(plus (inst emptyBag Int) 1)")); }),
            ErrorKind::TypeMismatch);
  EXPECT_EQ(kindOf([] { typecheck(P(), *Term::constant("nosuch")); }),
            ErrorKind::UnknownConstant);
  EXPECT_EQ(kindOf([] { typecheck(P(), *term("(lam (x (Frob Int)) x)")); }),
            ErrorKind::UnknownBaseType);
}

TEST(Typecheck, ContextLookupIsRightmost) {
  TypingContext ctx{{"x", types::intT()}, {"x", types::bag(types::intT())}};
  EXPECT_EQ(showType(*typecheck(P(), ctx, *Term::var("x"))), "Bag Int");
}

TEST(Typecheck, EveryCorpusProgramIsClosedAndWellTyped) {
  auto files = corpusFiles();
  ASSERT_GE(files.size(), 20u);
  for (const auto& f : files) {
    TermPtr t = parseTerm(readFile(f), P());
    EXPECT_NO_THROW(typecheck(P(), *t)) << f;
    EXPECT_TRUE(freeVars(*t).empty()) << f;
  }
}

TEST(Eval, Beta) {
  EXPECT_EQ(force(eval(P(), term("((lam (x Int) x) 5)"))).asInt(), 5);
}

TEST(Eval, SumOfFourElements) {
  Value f = eval(P(), loadCorpus("sum"));
  EXPECT_EQ(force(apply(f, value("(bag 1 2 3 4)"))).asInt(), 10);
}

TEST(Eval, HistogramSmallInput) {
  Value f = eval(P(), loadCorpus("histogram"));
  Value out = force(apply(f, value("(map (1 (bag 1 2)) (2 (bag 2 3)))")));
  std::map<std::int64_t, std::int64_t> expected{{1, 1}, {2, 2}, {3, 1}};
  EXPECT_EQ(toIntMap(out), expected);
}

TEST(Eval, HistogramMatchesWordCountModel) {
  Value f = eval(P(), loadCorpus("histogram"));
  bench::Rng rng(7);
  for (std::int64_t n : {1000, 3000}) {
    Value docs = bench::genInput(n, rng);
    EXPECT_EQ(toIntMap(force(apply(f, docs))), wordCount(docs));
  }
}

TEST(Eval, Deterministic) {
  for (const auto& f : corpusFiles()) {
    TermPtr t = parseTerm(readFile(f), P());
    TypePtr ty = typecheck(P(), *t);
    bench::Rng rng(3);
    Value a = bench::randomValue(P(), *ty->domain(), rng, 20);
    Value f1 = eval(P(), t);
    Value f2 = eval(P(), t);
    EXPECT_TRUE(valueEquals(force(apply(f1, a)), force(apply(f2, a)))) << f;
  }
}

TEST(Eval, TypePreservationOnCorpus) {
  bench::Rng rng(11);
  for (const auto& f : corpusFiles()) {
    TermPtr t = parseTerm(readFile(f), P());
    TypePtr ty = typecheck(P(), *t);
    Value fn = eval(P(), t);
    for (int i = 0; i < 20; ++i) {
      Value a = bench::randomValue(P(), *ty->domain(), rng, 30);
      ASSERT_TRUE(valueHasType(a, *ty->domain())) << f;
      EXPECT_TRUE(valueHasType(force(apply(fn, a)), *ty->codomain())) << f;
    }
  }
}

TEST(Eval, CorpusTerminatesWithinFuel) {
  bench::Rng rng(5);
  for (const auto& f : corpusFiles()) {
    TermPtr t = parseTerm(readFile(f), P());
    TypePtr ty = typecheck(P(), *t);
    Trial trial = makeTrial(*ty->domain(), 1000, rng);
    EvalStats stats;
    stats.fuel = 10'000'000;
    ScopedEvalStats scope(stats);
    EXPECT_NO_THROW(force(apply(eval(P(), t), trial.input))) << f;
  }
}

TEST(Eval, FuelExhaustion) {
  EvalStats stats;
  stats.fuel = 3;
  ScopedEvalStats scope(stats);
  Value f = eval(P(), loadCorpus("sum"));
  EXPECT_EQ(kindOf([&] { force(apply(f, value("(bag 1 2 3 4 5 6 7 8)"))); }),
            ErrorKind::FuelExhausted);
}

TEST(Eval, EnvironmentLookupIsRightmost) {
  Environment env = Environment{}.extend("x", Value(1)).extend("x", Value(2));
  ASSERT_NE(env.lookup("x"), nullptr);
  EXPECT_EQ(env.lookup("x")->asInt(), 2);
  EXPECT_EQ(env.lookup("y"), nullptr);
  EXPECT_EQ(force(eval(P(), Term::var("x"), env)).asInt(), 2);
}

TEST(FreeVars, Examples) {
  EXPECT_TRUE(freeVars(*term("(lam (x Int) x)")).empty());
  std::set<std::string> fx{"f", "x"};
  EXPECT_EQ(freeVars(*Term::app(Term::var("f"), Term::var("x"))), fx);
  EXPECT_TRUE(freeVars(*loadCorpus("histogram")).empty());
}

TEST(Syntax, ParseLambda) {
  TermPtr t = term("(lam (x Int) x)");
  ASSERT_TRUE(t->isLam());
  EXPECT_EQ(t->name(), "x");
  EXPECT_TRUE(typeEquals(*t->paramType(), *types::intT()));
  ASSERT_TRUE(t->body()->isVar());
  EXPECT_EQ(t->body()->name(), "x");
}

TEST(Syntax, PrettyLambda) {
  EXPECT_EQ(pretty(*Term::lam("x", types::intT(), Term::var("x"))), "(lam (x Int) x)");
}

TEST(Syntax, RoundTripHistogram) {
  TermPtr t = loadCorpus("histogram");
  TermPtr back = term(pretty(*t));
  EXPECT_TRUE(alphaEquivalent(*t, *back));
  EXPECT_EQ(pretty(*back), pretty(*t));
}

TEST(Syntax, RoundTripCorpus) {
  for (const auto& f : corpusFiles()) {
    TermPtr t = parseTerm(readFile(f), P());
    EXPECT_TRUE(alphaEquivalent(*t, *term(pretty(*t)))) << f;
  }
}

TEST(Syntax, EmbeddedHistogramMatchesCorpusFile) {
  EXPECT_TRUE(alphaEquivalent(*term(bench::histogramSource()), *loadCorpus("histogram")));
}

TEST(Syntax, LeftAssociativeSugar) {
  TermPtr a = term("(plus 1 2)");
  TermPtr b = term("(app (app plus 1) 2)");
  EXPECT_TRUE(alphaEquivalent(*a, *b));
  EXPECT_EQ(force(eval(P(), a)).asInt(), 3);
}

TEST(Syntax, LazyApplicationRoundTrips) {
  TermPtr t = term("(app-lazy (lam (x Int) x) 4)");
  ASSERT_TRUE(t->isApp());
  EXPECT_TRUE(t->deferArg());
  EXPECT_EQ(pretty(*t), "(app-lazy (lam (x Int) x) 4)");
}

TEST(Syntax, Errors) {
  EXPECT_EQ(kindOf([] { term("(lam (x Int) x"); }), ErrorKind::SyntaxError);
  EXPECT_EQ(kindOf([] { term(")"); }), ErrorKind::SyntaxError);
  EXPECT_EQ(kindOf([] { type("(->)"); }), ErrorKind::SyntaxError);
}

TEST(Syntax, Types) {
  EXPECT_EQ(showType(*type("(-> (Map Int (Bag Int)) (Map Int Int))")),
            "Map Int (Bag Int) -> Map Int Int");
  EXPECT_EQ(showType(*type("(-> Int Int Int)")), "Int -> Int -> Int");
  EXPECT_EQ(showType(*type("(-> (-> Int Int) Int)")), "(Int -> Int) -> Int");
  TypePtr t = type("(-> (Pair Int (Bag Int)) Int)");
  EXPECT_TRUE(typeEquals(*type(typeToSexpr(*t)), *t));
}

TEST(Values, LiteralsAreCanonicalAndOrderIndependent) {
  Value a = value("(bag 1 2 2 3 (* 4 0))");
  Value b = value("(bag 3 2 1 2)");
  EXPECT_TRUE(valueEquals(a, b));
  EXPECT_TRUE(isCanonical(a));
  EXPECT_EQ(showValue(a), showValue(b));
  EXPECT_TRUE(valueEquals(value("(map (2 5) (1 0))"), value("(map (2 5))")));
  EXPECT_FALSE(valueEquals(value("(bag 1)"), value("(bag 1 1)")));
}

TEST(Values, ShowParsesBack) {
  for (const char* text :
       {"(bag 1 (* 2 -3))", "(map (1 (bag 4)) (2 (bag 5 5)))", "(pair 1 (bag 2))",
        "(replace (bag 7))", "(groupchange bagGroup (bag (* 1 -1) 5))"}) {
    Value v = value(text);
    EXPECT_EQ(showValue(value(showValue(v))), showValue(v)) << text;
  }
}

TEST(Values, HasType) {
  EXPECT_TRUE(valueHasType(value("(bag 1 2)"), *types::bag(types::intT())));
  EXPECT_FALSE(valueHasType(value("(bag 1 2)"), *types::intT()));
  EXPECT_TRUE(valueHasType(value("(map (1 (bag 2)))"),
                           *types::map(types::intT(), types::bag(types::intT()))));
  EXPECT_FALSE(valueHasType(value("(map (1 2))"),
                            *types::map(types::intT(), types::bag(types::intT()))));
}
