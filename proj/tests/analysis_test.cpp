#include <gtest/gtest.h>

#include <functional>

#include "ilc/analysis.hpp"
#include "ilc/bench.hpp"
#include "ilc/change.hpp"
#include "ilc/collections.hpp"
#include "ilc/derive.hpp"
#include "ilc/eval.hpp"
#include "ilc/syntax.hpp"
#include "ilc/typecheck.hpp"
#include "support.hpp"

using namespace ilc;
using namespace ilc::testing;
namespace col = ilc::collections;

namespace {

TermPtr derived(const TermPtr& t, bool spec) {
  TermPtr d = derive(renameAvoidingD(t), DeriveConfig{&P(), true});
  return spec ? specialize(d, P().specializations()) : d;
}

bool mentionsConstant(const Term& t, const std::string& name) {
  switch (t.kind()) {
    case Term::Kind::Const: return t.name() == name;
    case Term::Kind::Var: return false;
    case Term::Kind::Lam: return mentionsConstant(*t.body(), name);
    case Term::Kind::App:
      return mentionsConstant(*t.fun(), name) || mentionsConstant(*t.arg(), name);
  }
  return false;
}

std::uint64_t forcesFor(const bench::Incrementalized& p, const Value& input, const Value& change) {
  EvalStats stats;
  ScopedEvalStats scope(stats);
  force(apply(p.df, {input, change}));
  return stats.forces;
}

Value removeOneAddFive() { return value("(groupchange bagGroup (bag (* 1 -1) 5))"); }

}  // namespace

TEST(MarkClosed, HistogramIsClosed) {
  TermPtr t = loadCorpus("histogram");
  ClosednessMap m = markClosed(t);
    EXPECT_TRUE(m.at(t.get()));
  EXPECT_FALSE(m.at(t->body().get()));
  EXPECT_EQ(m.size(), termSize(*t));
}

TEST(MarkClosed, HistogramFoldArgumentsAreClosed) {
  TermPtr t = loadCorpus("histogram");
  ClosednessMap m = markClosed(t);
  int folds = 0;
  std::function<void(const TermPtr&)> walk = [&](const TermPtr& n) {
    if (n->isLam()) return walk(n->body());
    if (!n->isApp()) return;
    Spine sp = unspine(n);
    if (sp.head->isConst() && (sp.head->name() == "foldBag" || sp.head->name() == "foldMap")) {
      ++folds;
      for (std::size_t i = 0; i + 1 < sp.args.size(); ++i)
        EXPECT_TRUE(m.at(sp.args[i].get())) << pretty(*sp.args[i]);
    }
    walk(sp.head);
    for (const auto& a : sp.args) walk(a);
  };
  walk(t);
  EXPECT_EQ(folds, 5);
}

TEST(MarkClosed, IdentityLambda) {
  TermPtr t = term("(lam (x Int) x)");
  ClosednessMap m = markClosed(t);
  EXPECT_TRUE(m.at(t.get()));
  EXPECT_FALSE(m.at(t->body().get()));
}

TEST(MarkClosed, SumFoldFunctionIsClosed) {
  TermPtr t = loadCorpus("sum");
  ClosednessMap m = markClosed(t);
  Spine sp = unspine(t->body());
  ASSERT_EQ(sp.args.size(), 3u);
  EXPECT_TRUE(m.at(sp.args[0].get()));   // group
  EXPECT_TRUE(m.at(sp.args[1].get()));   // element function
  EXPECT_FALSE(m.at(sp.args[2].get()));  // the bag parameter
}

TEST(Specialize, SumUsesSpecializedFold) {
  TermPtr d = derived(loadCorpus("sum"), true);
  EXPECT_TRUE(mentionsConstant(*d, "foldBagDInt"));
  EXPECT_FALSE(mentionsConstant(*d, "foldBag'"));
  Value dv = force(apply(eval(P(), d), {value("(bag 1 2 3 4)"), removeOneAddFive()}));
  EXPECT_EQ(dv.asInt(), 4);
  EXPECT_EQ(oplus(Value(10), dv).asInt(), 14);
}

TEST(Specialize, CollectionFoldReturnsGroupChange) {
  TermPtr d = derived(loadCorpus("bag_map"), true);
  EXPECT_TRUE(mentionsConstant(*d, "foldBagD"));
  Value dv = force(apply(eval(P(), d), {value("(bag 1 2 3 4)"), removeOneAddFive()}));
  ASSERT_TRUE(dv.isChange());
  EXPECT_EQ(dv.change().kind, CollectionChange::Kind::GroupChange);
  Value out = force(apply(eval(P(), loadCorpus("bag_map")), value("(bag 1 2 3 4)")));
  Value expected = force(apply(eval(P(), loadCorpus("bag_map")), value("(bag 2 3 4 5)")));
  EXPECT_TRUE(valueEquals(oplus(out, dv), expected));
}

TEST(Specialize, FoldBuilderMatchesSelfMaintainableShape) {
  auto entries = P().specializations().lookup("foldBag");
  ASSERT_FALSE(entries.empty());
  std::vector<TypePtr> args{types::intT(), types::bag(types::intT())};
  TermPtr s = entries[0].second->build(args);
  EXPECT_TRUE(isSelfMaintainable(*s)) << pretty(*s);
  // Base values of the nil positions, then the derivative past its first two pairs.
  TypePtr foldT = typecheck(P(), *Term::constant("foldBag", args));
  TypePtr rest = changeType(P(), *foldT);
  for (int i = 0; i < 4; ++i) rest = rest->codomain();
  TypePtr expected = types::fn({foldT->domain(), foldT->codomain()->domain(), rest});
  EXPECT_TRUE(typeEquals(*typecheck(P(), *s), *expected)) << showType(*typecheck(P(), *s));
}

TEST(Specialize, OpenFoldArgumentsAreLeftAlone) {
  TermPtr d = derived(loadCorpus("sum_of_squares"), false);
  TermPtr s = specialize(d, P().specializations());
  EXPECT_TRUE(alphaEquivalent(*s, *d));
  EXPECT_TRUE(mentionsConstant(*s, "foldBag'"));
}

TEST(Specialize, NothingToRewrite) {
  TermPtr d = derived(term("(lam (x Int) (plus x 1))"), false);
  EXPECT_TRUE(alphaEquivalent(*specialize(d, P().specializations()), *d));
  EXPECT_TRUE(alphaEquivalent(*specialize(d, SpecializationTable{}), *d));
}

TEST(Specialize, PreservesSemanticsOnCorpus) {
  for (const auto& f : corpusFiles()) {
    TermPtr t = parseTerm(readFile(f), P());
    bench::Incrementalized fast = bench::prepare(P(), t, {true, true});
    bench::Incrementalized slow = bench::prepare(P(), t, {false, true});
    bench::Rng rng(41);
    for (int i = 0; i < 25; ++i) {
      Trial trial = makeTrial(*fast.type->domain(), 1000, rng);
      Value out = force(apply(fast.f, trial.input));
      Value a = force(apply(fast.oplusOut, {out, apply(fast.df, {trial.input, trial.change})}));
      Value b = force(apply(slow.oplusOut, {out, apply(slow.df, {trial.input, trial.change})}));
      ASSERT_TRUE(valueEquals(a, b)) << f;
    }
  }
}

TEST(SelfMaintainable, Examples) {
  EXPECT_TRUE(isSelfMaintainable(*term(
      "(lam (x (Bag Int)) (lam (dx (Delta (Bag Int))) (lam (y (Bag Int)) (lam (dy (Delta (Bag Int)))"
      " ((inst union Int) dx dy)))))")));
  EXPECT_FALSE(isSelfMaintainable(*term(
      "(lam (b (Bag Int)) (lam (db (Delta (Bag Int)))"
      " (ominusInt ((inst foldBag Int Int) intAdd (lam (x Int) x) ((inst oplus (Bag Int)) b db))"
      "            ((inst foldBag Int Int) intAdd (lam (x Int) x) b))))")));
  EXPECT_TRUE(isSelfMaintainable(*term(
      "(lam (b (Bag Int)) (lam (db (Delta (Bag Int)))"
      " ((inst groupChange (Bag Int)) (inst bagGroup Int)"
      "   ((inst foldBag Int (Bag Int)) (inst bagGroup Int) (inst singletonBag Int) db))))")));
}

TEST(SelfMaintainable, UnpairedParametersAreIgnored) {
  EXPECT_TRUE(isSelfMaintainable(*term(
      "(lam (g (Group Int)) (lam (b (Bag Int)) (lam (db (Delta (Bag Int))) g)))")));
  EXPECT_FALSE(isSelfMaintainable(*term("(lam (x Int) (lam (dx Int) (plus x dx)))")));
}

TEST(LazyBaseArguments, SpecializedHistogramForcesNothing) {
  bench::Incrementalized p = bench::prepare(P(), loadCorpus("histogram"), {true, true});
  bench::Rng rng(42);
  Value input = bench::genInput(2000, rng);
  for (int i = 0; i < 20; ++i)
    EXPECT_EQ(forcesFor(p, input, bench::genChange(input, rng)), 0u);
}

TEST(LazyBaseArguments, SpecializedSumForcesNothing) {
  bench::Incrementalized p = bench::prepare(P(), loadCorpus("sum"), {true, true});
  EXPECT_EQ(forcesFor(p, value("(bag 1 2 3 4)"), removeOneAddFive()), 0u);
}

TEST(LazyBaseArguments, FallbackForcesBaseArguments) {
  bench::Incrementalized p = bench::prepare(P(), loadCorpus("histogram"), {false, true});
  bench::Rng rng(42);
  Value input = bench::genInput(1000, rng);
  EXPECT_GE(forcesFor(p, input, bench::genChange(input, rng)), 1u);
}

TEST(LazyBaseArguments, AtMostOnce) {
  EvalStats stats;
  ScopedEvalStats scope(stats);
  Value v = force(eval(P(), term("(app-lazy (lam (x Int) (plus x x)) (mul 3 4))")));
  EXPECT_EQ(v.asInt(), 24);
  EXPECT_EQ(stats.deferrals, 1u);
  EXPECT_EQ(stats.forces, 1u);
}

TEST(LazyBaseArguments, UnusedArgumentIsNeverForced) {
  EvalStats stats;
  ScopedEvalStats scope(stats);
  Value v = force(eval(P(), term("(app-lazy (lam (x Int) 7) (mul 3 4))")));
  EXPECT_EQ(v.asInt(), 7);
  EXPECT_EQ(stats.deferrals, 1u);
  EXPECT_EQ(stats.forces, 0u);
}
