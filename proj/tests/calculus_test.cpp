#include <gtest/gtest.h>

#include "bi/bi.hpp"
#include "support/generator.hpp"

namespace bi {
namespace {

using namespace corpus;

ErrorKind error_of(const Derivation& d) {
  auto e = check_valid(d);
  return e ? e->kind() : ErrorKind::InternalInconsistency;
}

TEST(EndSequent, Axiom) {
  Sequent s{eq00(), negate(eq00())};
  EXPECT_EQ(ax(s).end_sequent(), s);
}

TEST(EndSequent, CutRemovesBothSides) {
  EXPECT_EQ(cut_example().end_sequent(), Sequent{eq00()});
}

TEST(EndSequent, SubSubstitutes) {
  Derivation d = col(em_premise());
  Sequent want = subst_set(d.end_sequent(), "X", eq_zero());
  EXPECT_EQ(sub("X", eq_zero(), d).end_sequent(), want);
}

TEST(EndSequent, UnaryRulesKeepSequent) {
  Derivation d = cut_example();
  EXPECT_EQ(e(d).end_sequent(), d.end_sequent());
  EXPECT_EQ(ew(d).end_sequent(), d.end_sequent());
  Derivation p = proof_i();
  EXPECT_EQ(col(p).end_sequent(), p.end_sequent());
}

TEST(EndSequent, TemplateUsesSchema) {
  NumTerm v = NumTerm::var("v");
  EXPECT_EQ(proof_ii().end_sequent(), Sequent{all_refl()});
  for (std::uint64_t k : {0, 1, 5}) {
    Derivation p = premise_at(proof_ii().family(), k);
    EXPECT_EQ(p.end_sequent(), Sequent{subst_num(eq(v, v), "v", n(k))});
  }
}

TEST(EndSequent, WrongPrincipalIsIllFormed) {
  Derivation d = and_i(disj(eq00(), eq00()), ax({eq00()}), ax({eq00()}));
  EXPECT_FALSE(d.well_formed());
}

TEST(Degree, Examples) {
  EXPECT_EQ(cut_example().degree(), 1u);
  EXPECT_EQ(e(cut_example()).degree(), 0u);
  EXPECT_EQ(ew(proof_iii()).degree(), 0u);
  EXPECT_EQ(proof_iii().degree(), 1u);
}

TEST(Degree, OrSetTakesInstanceRank) {
  // rank(~(eq(0,0) v ~eq(0,0))) = 1
  EXPECT_EQ(refute_em().degree(), 1u);
}

TEST(Degree, EDecrementsWithFloor) {
  Derivation c = cut(all_refl(), proof_ii(), ex_i(0, negate(all_refl()), ax({eq00(), negate(eq00())})));
  ASSERT_TRUE(c.well_formed()) << c.malformation();
  EXPECT_EQ(c.degree(), 2u);
  EXPECT_EQ(e(c).degree(), 1u);
  EXPECT_EQ(e(e(e(c))).degree(), 0u);
}

TEST(Proper, WithoutColOrSub) {
  EXPECT_TRUE(is_proper(proof_iii()).ok);
  EXPECT_TRUE(is_proper(cut_example()).ok);
}

TEST(Proper, ColOverPositiveDegree) {
  ProperReport r = is_proper(col(cut_example()));
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.clause, 1);
}

TEST(Proper, SubOverCol) {
  EXPECT_TRUE(is_proper(sub("X", eq_zero(), col(e(cut_example())))).ok);
}

TEST(Proper, SubNotOverCol) {
  ProperReport r = is_proper(sub("X", eq_zero(), e(cut_example())));
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.clause, 2);
}

TEST(Proper, ColOverNonPi1) {
  ProperReport r = is_proper(col(refute_em()));
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.clause, 1);
  EXPECT_EQ(r.path, "");
}

TEST(PremiseAt, Template) {
  Derivation p = premise_at(proof_ii().family(), 2);
  EXPECT_TRUE(alpha_equal(p, ax({eq(n(2), n(2))})));
}

TEST(PremiseAt, Selector) {
  Derivation p = proof_ii();
  EXPECT_TRUE(alpha_equal(premise_at(selector(p), 0), child(p, ChildIndex::at(0))));
}

TEST(PremiseAt, MapRed) {
  Derivation p = premise_at(map_red(proof_ii().family()), 3);
  EXPECT_TRUE(alpha_equal(p, ax({eq(n(3), n(3))})));
}

TEST(Validate, AxiomNotTrue) { EXPECT_EQ(error_of(ax({lt00()})), ErrorKind::AxiomNotTrue); }

TEST(Validate, EigenvariableEscapes) {
  // Y stays free in the side formula Y(0).
  Formula yl = set_lit("Y", n(0));
  Derivation d0 = ax({yl, negate(yl)});
  Formula target = forall_set("X", disj(set_lit("X", n(0)), negate(set_lit("X", n(0)))));
  Derivation d = all_set_i("Y", target, or_i(0, instantiate(target, std::string("Y")), d0));
  EXPECT_EQ(error_of(d), ErrorKind::EigenvariableEscapes);
}

TEST(Validate, EigenvariableClashOnPath) {
  // all_set_i X over a cut whose left premise binds X again.
  Formula lit = set_lit("X", n(0));
  Formula em = excluded_middle("X");
  Derivation inst = and_i(conj(negate(lit), lit), ax({lit, negate(lit)}), ax({lit, negate(lit)}));
  Derivation d1 = or_set_i(abstraction("x", set_lit("X", NumTerm::var("x"))), negate(forall_em()),
                           or_i(1, em, or_i(0, em, inst)));
  Derivation d = all_set_i("X", forall_em(), cut(forall_em(), proof_i(), d1));
  ASSERT_TRUE(d.well_formed()) << d.malformation();
  EXPECT_EQ(error_of(d), ErrorKind::EigenvariableClash);
}

TEST(Validate, CorpusIsValid) {
  for (const auto& name : scenario_names()) {
    Scenario s = scenario(name);
    EXPECT_FALSE(check_valid(s.input)) << name;
    EXPECT_FALSE(check_valid(s.expected_red)) << name;
  }
  for (const auto& [name, d] : sample_proofs()) EXPECT_FALSE(check_valid(d)) << name;
}

TEST(RenameSeparated, NoEigenvariables) {
  Derivation a = ax({eq00()});
  EXPECT_TRUE(identical(rename_separated(a), a));
}

TEST(RenameSeparated, DuplicatedBranchesGetFreshNames) {
  Derivation d = and_i(conj(forall_em(), forall_em()), proof_i(), proof_i());
  ASSERT_FALSE(check_valid(d));
  Derivation sep = rename_separated(d);
  EXPECT_TRUE(alpha_equal(sep, d));
  EXPECT_EQ(sep.end_sequent(), d.end_sequent());
  EXPECT_EQ(sep.degree(), d.degree());
  std::vector<std::string> eigen;
  for_each_node(sep, [&](const Derivation& x, const std::string&) {
    if (x.kind() == DKind::AllSetI) eigen.push_back(x.var());
    return true;
  });
  std::set<std::string> distinct(eigen.begin(), eigen.end());
  EXPECT_GE(eigen.size(), 2u);
  EXPECT_EQ(distinct.size(), eigen.size());
}

TEST(CalculusProperties, GeneratedDerivations) {
  testing::Generator gen(11);
  for (int k = 0; k < 500; ++k) {
    Derivation d = gen.proper_derivation();
    EXPECT_EQ(e(d).end_sequent(), d.end_sequent());
    EXPECT_EQ(ew(d).end_sequent(), d.end_sequent());
    EXPECT_EQ(ew(d).degree(), 0u);
    EXPECT_EQ(e(d).degree(), d.degree() > 0 ? d.degree() - 1 : 0u);
    for_each_node(d, [&](const Derivation& x, const std::string& path) {
      EXPECT_TRUE(is_proper(x).ok) << render(d) << " at " << path;
      return true;
    });
  }
}

}  // namespace
}  // namespace bi
