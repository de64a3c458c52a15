#include <gtest/gtest.h>

#include "ilc/bench.hpp"
#include "ilc/change.hpp"
#include "ilc/collections.hpp"
#include "ilc/error.hpp"
#include "ilc/eval.hpp"
#include "ilc/syntax.hpp"
#include "ilc/typecheck.hpp"
#include "support.hpp"

using namespace ilc;
using namespace ilc::testing;
namespace col = ilc::collections;

namespace {

const char* kBaseTypes[] = {
    "Int",
    "(Bag Int)",
    "(Bag (Pair Int Int))",
    "(Map Int Int)",
    "(Map Int (Bag Int))",
    "(Map Int (Map Int Int))",
    "(Pair Int (Bag Int))",
};

Value fn(const std::string& text) { return eval(P(), term(text)); }

Value removeOneAddFive() { return value("(groupchange bagGroup (bag (* 1 -1) 5))"); }

}  // namespace

TEST(Oplus, IntDelta) { EXPECT_EQ(oplus(Value(10), Value(4)).asInt(), 14); }

TEST(Oplus, BagGroupChange) {
  Value out = oplus(value("(bag 1 2 3 4)"), removeOneAddFive());
  EXPECT_TRUE(valueEquals(out, value("(bag 2 3 4 5)")));
}

TEST(Oplus, Replace) {
  EXPECT_TRUE(valueEquals(oplus(value("(bag 1)"), value("(replace (bag 9 9))")),
                          value("(bag 9 9)")));
}

TEST(Oplus, Pair) {
  Value out = oplus(value("(pair 1 (bag 2))"), value("(pair 5 (groupchange bagGroup (bag 3)))"));
  EXPECT_TRUE(valueEquals(out, value("(pair 6 (bag 2 3))")));
}

TEST(Oplus, ShapeMismatch) {
  EXPECT_THROW(oplus(Value(3), value("(replace (bag 1))")), Error);
  EXPECT_THROW(oplus(value("(bag 1)"), Value(3)), Error);
  try {
    oplus(value("(bag 1)"), Value(3));
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ChangeTypeMismatch);
  }
  EXPECT_FALSE(isChangeCompatible(Value(3), value("(replace (bag 1))")));
  EXPECT_TRUE(isChangeCompatible(value("(bag 1)"), removeOneAddFive()));
}

TEST(Ominus, IntDifference) { EXPECT_EQ(ominus(Value(14), Value(10)).asInt(), 4); }

TEST(Ominus, BagIsReplace) {
  Value d = ominus(value("(bag 2 3 4 5)"), value("(bag 1 2 3 4)"));
  ASSERT_TRUE(d.isChange());
  EXPECT_EQ(d.change().kind, CollectionChange::Kind::Replace);
  EXPECT_TRUE(valueEquals(d.change().payload, value("(bag 2 3 4 5)")));
}

TEST(Nil, Int) { EXPECT_EQ(nilChange(Value(7)).asInt(), 0); }

TEST(Nil, BagIsEmptyGroupChange) {
  Value d = nilChange(value("(bag 1 2)"));
  ASSERT_TRUE(d.isChange());
  EXPECT_EQ(d.change().kind, CollectionChange::Kind::GroupChange);
  EXPECT_EQ(d.change().group->name, col::bagGroup()->name);
  EXPECT_TRUE(valueEquals(d.change().payload, col::emptyBag()));
}

TEST(Nil, TypedMapUsesCanonicalGroup) {
  TypePtr t = type("(Map Int (Bag Int))");
  Value d = nilChange(P(), *t, col::emptyMap());
  ASSERT_TRUE(d.isChange());
  EXPECT_EQ(d.change().kind, CollectionChange::Kind::GroupChange);
  EXPECT_EQ(d.change().group->name, col::canonicalGroup(*t)->name);
}

TEST(ChangeStructureLaws, RandomValuesEveryBaseType) {
  bench::Rng rng(1);
  for (const char* name : kBaseTypes) {
    TypePtr t = type(name);
    ChangeStructure cs = changeStructureFor(P(), t);
    for (int i = 0; i < 1000; ++i) {
      Value u = bench::randomValue(P(), *t, rng, 12);
      Value v = bench::randomValue(P(), *t, rng, 12);
      ASSERT_TRUE(valueEquals(cs.oplus(v, cs.ominus(u, v)), u)) << name;
      ASSERT_TRUE(valueEquals(cs.oplus(v, cs.nil(v)), v)) << name;
      ASSERT_TRUE(cs.member(v, cs.ominus(u, v))) << name;
      ASSERT_TRUE(cs.member(v, cs.nil(v))) << name;
    }
  }
}

TEST(ChangeStructureLaws, RandomChangesAreMembers) {
  bench::Rng rng(2);
  for (const char* name : kBaseTypes) {
    TypePtr t = type(name);
    ChangeStructure cs = changeStructureFor(P(), t);
    for (int i = 0; i < 300; ++i) {
      Value v = bench::randomValue(P(), *t, rng, 12);
      Value dv = bench::randomChange(P(), *t, v, rng);
      ASSERT_TRUE(cs.member(v, dv)) << name << " " << showValue(dv);
      ASSERT_TRUE(valueHasType(cs.oplus(v, dv), *t)) << name;
      ASSERT_TRUE(isCanonical(cs.oplus(v, dv))) << name;
    }
  }
}

TEST(ChangeStructureLaws, MembershipRejectsWrongShapes) {
  ChangeStructure bags = changeStructureFor(P(), type("(Bag Int)"));
  EXPECT_FALSE(bags.member(value("(bag 1)"), Value(3)));
  EXPECT_FALSE(bags.member(value("(bag 1)"), value("(groupchange intAdd 3)")));
  ChangeStructure maps = changeStructureFor(P(), type("(Map Int Int)"));
  EXPECT_TRUE(maps.member(value("(map (1 2))"), value("(groupchange (mapGroup intAdd) (map (1 5)))")));
  EXPECT_TRUE(maps.member(value("(map (1 2))"), value("(replace (map (3 3)))")));
}

TEST(GroupChangeStructure, IntAddIsAddition) {
  ChangeStructure z = groupToChangeStructure(col::intAddGroup());
  EXPECT_EQ(z.oplus(Value(10), Value(4)).asInt(), 14);
  EXPECT_EQ(z.ominus(Value(14), Value(10)).asInt(), 4);
  EXPECT_EQ(z.nil(Value(9)).asInt(), 0);
}

TEST(GroupChangeStructure, BagSelfDifferenceIsZero) {
  ChangeStructure b = groupToChangeStructure(col::bagGroup());
  Value d = b.ominus(value("(bag 1)"), value("(bag 1)"));
  ASSERT_TRUE(d.isChange());
  EXPECT_EQ(d.change().kind, CollectionChange::Kind::GroupChange);
  EXPECT_TRUE(valueEquals(d.change().payload, col::emptyBag()));
}

TEST(GroupChangeStructure, BagDifferenceIsSignedDelta) {
  ChangeStructure b = groupToChangeStructure(col::bagGroup());
  Value d = b.ominus(value("(bag 2 3 4 5)"), value("(bag 1 2 3 4)"));
  ASSERT_TRUE(d.isChange());
  EXPECT_EQ(d.change().group->name, col::bagGroup()->name);
  EXPECT_TRUE(valueEquals(d.change().payload, value("(bag (* 1 -1) 5)")));
}

TEST(GroupChangeStructure, LawsOnRandomCarrierValues) {
  bench::Rng rng(4);
  struct Case {
    GroupPtr g;
    const char* carrier;
  } cases[] = {{col::intAddGroup(), "Int"},
               {col::bagGroup(), "(Bag Int)"},
               {col::mapGroup(col::intAddGroup()), "(Map Int Int)"},
               {col::mapGroup(col::bagGroup()), "(Map Int (Bag Int))"}};
  for (const auto& c : cases) {
    ChangeStructure cs = groupToChangeStructure(c.g);
    TypePtr t = type(c.carrier);
    for (int i = 0; i < 500; ++i) {
      Value u = bench::randomValue(P(), *t, rng, 10);
      Value v = bench::randomValue(P(), *t, rng, 10);
      ASSERT_TRUE(valueEquals(cs.oplus(v, cs.ominus(u, v)), u)) << c.carrier;
      ASSERT_TRUE(valueEquals(cs.oplus(v, cs.nil(v)), v)) << c.carrier;
      ASSERT_TRUE(cs.member(v, cs.ominus(u, v))) << c.carrier;
    }
  }
}

TEST(FunctionChanges, NilIsIdentityPointwise) {
  Value sq = fn("(lam (x Int) (mul x x))");
  Value g = functionOplus(sq, nilChange(sq));
  for (std::int64_t v : {-3, 0, 2, 11}) EXPECT_EQ(force(apply(g, Value(v))).asInt(), v * v);
}

TEST(FunctionChanges, DifferenceUpdatesToTarget) {
  Value f = fn("(lam (x Int) (plus x 3))");
  Value g = fn("(lam (x Int) (mul x x))");
  Value df = functionOminus(g, f);
  for (std::int64_t v : {-3, 0, 2, 11}) {
    Value fv = force(apply(f, Value(v)));
    Value d = force(apply(df, {Value(v), Value(0)}));
    EXPECT_EQ(oplus(fv, d).asInt(), v * v);
  }
  Value h = functionOplus(f, df);
  EXPECT_EQ(force(apply(h, Value(5))).asInt(), 25);
}

TEST(FunctionChanges, UpdatedFunctionOnUpdatedInput) {
  bench::Rng rng(9);
  Value sum = eval(P(), loadCorpus("sum"));
  Value count = eval(P(), loadCorpus("count"));
  Value df = functionOminus(count, sum);
  TypePtr bag = type("(Bag Int)");
  for (int i = 0; i < 200; ++i) {
    Value a = bench::randomValue(P(), *bag, rng, 10);
    Value da = bench::randomChange(P(), *bag, a, rng);
    Value lhs = force(apply(functionOplus(sum, df), oplus(a, da)));
    Value rhs = oplus(force(apply(sum, a)), force(apply(df, {a, da})));
    ASSERT_TRUE(valueEquals(lhs, rhs));
  }
}

TEST(ValidateFunctionChange, NilAndDifferenceAreValid) {
  Value f = fn("(lam (x Int) (mul x x))");
  Value g = fn("(lam (x Int) (minus x 1))");
  std::vector<std::pair<Value, Value>> samples;
  for (std::int64_t a = -4; a <= 4; ++a) samples.emplace_back(Value(a), Value(3 - a));
  EXPECT_TRUE(validateFunctionChange(f, nilChange(f), samples));
  EXPECT_TRUE(validateFunctionChange(f, functionOminus(g, f), samples));
}

TEST(ValidateFunctionChange, WrongCodomainShapeIsInvalid) {
  Value id = fn("(lam (x Int) x)");
  Value bad = makeNative("bad", 2, [](std::span<const Value>) {
    return Value::replace(col::emptyBag());
  });
  std::vector<std::pair<Value, Value>> samples{{Value(1), Value(2)}};
  EXPECT_FALSE(validateFunctionChange(id, bad, samples));
}

TEST(ValidateFunctionChange, InconsistentChangeIsInvalid) {
  Value id = fn("(lam (x Int) x)");
  Value plusOne = makeNative("plus-one", 2, [](std::span<const Value>) { return Value(1); });
  std::vector<std::pair<Value, Value>> samples{{Value(1), Value(2)}};
  EXPECT_FALSE(validateFunctionChange(id, plusOne, samples));
}

TEST(ChangeEnvironment, PrefixedNames) {
  ChangeEnvironment denv = ChangeEnvironment{}.extend("x", Value(2)).extend("y", Value(5));
  EXPECT_EQ(denv.size(), 2u);
  ASSERT_NE(denv.lookup("x"), nullptr);
  EXPECT_EQ(denv.lookup("x")->asInt(), 2);
  ASSERT_NE(denv.asEnvironment().lookup("dy"), nullptr);
  EXPECT_EQ(denv.lookup("z"), nullptr);
}

TEST(ChangeEval, Variable) {
  Environment env = Environment{}.extend("x", Value(3));
  ChangeEnvironment denv = ChangeEnvironment{}.extend("x", Value(2));
  EXPECT_EQ(force(changeEval(P(), Term::var("x"), env, denv)).asInt(), 2);
}

TEST(ChangeEval, SumRemoveOneAddFive) {
  TermPtr t = Term::app(loadCorpus("sum"), Term::var("s"));
  Environment env = Environment{}.extend("s", value("(bag 1 2 3 4)"));
  ChangeEnvironment denv = ChangeEnvironment{}.extend("s", removeOneAddFive());
  Value dv = force(changeEval(P(), t, env, denv));
  EXPECT_EQ(oplus(Value(10), dv).asInt(), 14);
}

TEST(ChangeEval, ClosedTermsHaveNilChanges) {
  for (const char* text : {"(plus 1 2)", "((inst singletonBag Int) 3)",
                           "((inst union Int) ((inst singletonBag Int) 3) (inst emptyBag Int))",
                           "((inst pair Int Int) 4 5)"}) {
    TermPtr t = term(text);
    Value v = force(eval(P(), t));
    Value dv = force(changeEval(P(), t, {}, {}));
    EXPECT_TRUE(valueEquals(oplus(v, dv), v)) << text;
  }
  bench::Rng rng(6);
  for (const auto& f : corpusFiles()) {
    TermPtr t = parseTerm(readFile(f), P());
    TypePtr ty = typecheck(P(), *t);
    Value fv = eval(P(), t);
    Value updated = functionOplus(fv, changeEval(P(), t, {}, {}));
    for (int i = 0; i < 5; ++i) {
      Value a = bench::randomValue(P(), *ty->domain(), rng, 10);
      EXPECT_TRUE(valueEquals(force(apply(updated, a)), force(apply(fv, a)))) << f;
    }
  }
}

TEST(ChangeEval, LambdaBodySeesChangedArgument) {
  TermPtr t = term("(lam (x Int) (mul x x))");
  Value df = changeEval(P(), t, {}, {});
  Value d = force(apply(df, {Value(3), Value(2)}));
  EXPECT_EQ(oplus(Value(9), d).asInt(), 25);
}
