#include <gtest/gtest.h>

#include "bi/bi.hpp"
#include "support/generator.hpp"

namespace bi {
namespace {

NumTerm n(std::uint64_t k) { return NumTerm::numeral(k); }
NumTerm x() { return NumTerm::var("x"); }

TEST(Negate, DeMorganOnConjunction) {
  Formula a = conj(eq(n(0), n(0)), lt(n(1), n(0)));
  EXPECT_EQ(negate(a), disj(negate(eq(n(0), n(0))), negate(lt(n(1), n(0)))));
}

TEST(Negate, SetUniversalBecomesExistential) {
  Formula em = forall_set("X", disj(set_lit("X", n(0)), negate(set_lit("X", n(0)))));
  Formula want = exists_set("X", conj(negate(set_lit("X", n(0))), set_lit("X", n(0))));
  EXPECT_EQ(negate(em), want);
}

TEST(Negate, LiteralFlipsPolarity) {
  Formula f = lt(n(0), x());
  EXPECT_FALSE(negate(f).positive());
  EXPECT_EQ(negate(negate(f)), f);
}

TEST(Rank, ArithmeticalUniversal) {
  Formula f = forall_num("x", disj(eq(x(), n(0)), lt(n(0), x())));
  EXPECT_EQ(rank(f), 2u);
}

TEST(Rank, SetQuantifiersAreZero) {
  Formula body = conj(set_lit("X", n(0)), forall_num("x", eq(x(), x())));
  EXPECT_EQ(rank(forall_set("X", body)), 0u);
  EXPECT_EQ(rank(exists_set("X", body)), 0u);
  EXPECT_EQ(rank(eq(n(0), n(0))), 0u);
}

TEST(SubstNum, ReplacesFreeOccurrencesOnly) {
  Formula f = conj(eq(x(), n(0)), forall_num("x", eq(x(), x())));
  Formula g = subst_num(f, "x", n(2));
  EXPECT_EQ(g, conj(eq(n(2), n(0)), forall_num("x", eq(x(), x()))));
}

TEST(SubstNum, SuccessorArithmetic) {
  Formula f = lt(succ(x()), n(3));
  EXPECT_EQ(subst_num(f, "x", n(1)), lt(n(2), n(3)));
}

TEST(SubstSet, AbstractionInstance) {
  Formula em = disj(set_lit("X", n(0)), negate(set_lit("X", n(0))));
  Abstraction t = abstraction("x", eq(x(), n(0)));
  Formula e00 = eq(n(0), n(0));
  EXPECT_EQ(subst_set(em, "X", t), disj(e00, negate(e00)));
}

TEST(SubstSet, AbsentVariableIsIdentity) {
  Formula f = conj(set_lit("Y", n(1)), eq(n(0), n(0)));
  EXPECT_EQ(subst_set(f, "X", abstraction("x", lt(x(), n(2)))), f);
}

TEST(EvalLiteral, Relations) {
  EXPECT_FALSE(eval_literal(lt(n(1), n(0))));
  EXPECT_TRUE(eval_literal(lt(n(0), n(1))));
  EXPECT_TRUE(eval_literal(le(n(2), n(2))));
  EXPECT_TRUE(eval_literal(negate(eq(n(2), n(3)))));
}

TEST(EvalLiteral, OpenLiteralThrows) {
  try {
    eval_literal(eq(x(), n(0)));
    FAIL() << "expected NotClosedLiteral";
  } catch (const ProofError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotClosedLiteral);
  }
}

TEST(EvalLiteral, AgreesWithBruteForce) {
  for (std::uint64_t a = 0; a <= 50; ++a)
    for (std::uint64_t b = 0; b <= 50; ++b) {
      EXPECT_EQ(eval_literal(eq(n(a), n(b))), a == b);
      EXPECT_EQ(eval_literal(lt(n(a), n(b))), a < b);
      EXPECT_EQ(eval_literal(le(n(a), n(b))), a <= b);
      EXPECT_EQ(eval_literal(negate(lt(n(a), n(b)))), !(a < b));
    }
}

TEST(Relations, RegisteredRelationEvaluates) {
  register_relation("even", 1, [](const std::vector<std::uint64_t>& v) { return v[0] % 2 == 0; });
  EXPECT_TRUE(eval_literal(rel("even", {n(4)})));
  EXPECT_FALSE(eval_literal(rel("even", {n(3)})));
}

TEST(Classify, Examples) {
  Formula em = disj(set_lit("X", n(0)), negate(set_lit("X", n(0))));
  EXPECT_EQ(classify(eq(n(0), n(0))), FormulaClass::Literal);
  EXPECT_EQ(classify(forall_set("X", em)), FormulaClass::Pi1);
  EXPECT_EQ(classify(exists_set("X", conj(negate(set_lit("X", n(0))), set_lit("X", n(0))))),
            FormulaClass::General);
}

TEST(FreeVars, Examples) {
  FreeVars a = free_vars(eq(x(), n(0)));
  EXPECT_EQ(a.num, std::set<std::string>{"x"});
  EXPECT_TRUE(a.set.empty());

  FreeVars b = free_vars(forall_set("X", disj(set_lit("X", n(0)), negate(set_lit("X", n(0))))));
  EXPECT_TRUE(b.num.empty());
  EXPECT_TRUE(b.set.empty());

  FreeVars c = free_vars(conj(set_lit("Y", succ(x())), eq(n(0), n(0))));
  EXPECT_EQ(c.num, std::set<std::string>{"x"});
  EXPECT_EQ(c.set, std::set<std::string>{"Y"});
}

TEST(Alpha, BoundNamesDoNotMatter) {
  EXPECT_EQ(forall_num("x", eq(x(), x())), forall_num("y", eq(NumTerm::var("y"), NumTerm::var("y"))));
  EXPECT_EQ(forall_set("X", set_lit("X", n(0))), forall_set("Z", set_lit("Z", n(0))));
}

TEST(Sequent, SetSemantics) {
  Formula a = eq(n(0), n(0)), b = lt(n(0), n(1));
  Sequent s{a, b, a};
  EXPECT_EQ(s.size(), 2u);
  EXPECT_TRUE(Sequent{a}.subset_of(s));
  EXPECT_EQ(s.minus(a), Sequent{b});
  EXPECT_EQ((Sequent{b, a}), s);
}

TEST(LangProperties, GeneratedFormulas) {
  testing::Generator gen(7);
  Abstraction t = abstraction("x", lt(x(), n(2)));
  for (int k = 0; k < 2000; ++k) {
    Formula f = gen.formula(3);
    EXPECT_EQ(negate(negate(f)), f);
    EXPECT_EQ(rank(negate(f)), rank(f));
    if (f.kind() == FKind::AllSet || f.kind() == FKind::ExSet) {
      EXPECT_EQ(rank(f), 0u);
    }
    if (!free_vars(f).set.count("Q")) {
      EXPECT_EQ(subst_set(f, "Q", t), f);
    }
    if (classify(f) != FormulaClass::General) {
      EXPECT_TRUE(is_pi1(subst_set(f, "X", t)));
    }
  }
}

}  // namespace
}  // namespace bi
