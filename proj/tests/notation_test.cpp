#include <gtest/gtest.h>

#include "bi/bi.hpp"
#include "support/generator.hpp"

namespace bi {
namespace {

using namespace corpus;

ErrorKind thrown(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ProofError& e) {
    return e.kind();
  }
  return ErrorKind::InternalInconsistency;
}

std::string thrown_clause(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ProofError& e) {
    return e.clause();
  }
  return "none";
}

TEST(RuleOf, EOverCutIsRep) {
  EXPECT_EQ(rule_of(e(cut_example())).kind, SKind::RepS);
}

TEST(RuleOf, OrSetIsOmega) {
  ExtendedSymbol s = rule_of(refute_em());
  EXPECT_EQ(s.kind, SKind::OmegaS);
  EXPECT_EQ(s.formula, negate(forall_em()));
}

TEST(RuleOf, AxiomIsAxiom) {
  EXPECT_EQ(rule_of(ax({eq00()})), ExtendedSymbol::ax({eq00()}));
}

TEST(RuleOf, T16Instance) {
  Scenario s = scenario("T16");
  EXPECT_EQ(rule_of(s.input).kind, SKind::OmegaTildeS);
  EXPECT_EQ(rule_of(s.input).eigen, "X");
}

TEST(RuleOf, SubRelabelsSymbol) {
  Derivation d = sub("X", eq_zero(), col(em_premise()));
  ExtendedSymbol s = rule_of(d);
  EXPECT_EQ(s.kind, SKind::OrS);
  EXPECT_EQ(s.formula, instantiate(forall_em(), eq_zero()));
}

TEST(Child, EOverCut) {
  Derivation a0 = ax({eq00()}), a1 = ax({eq00(), negate(eq00())});
  EXPECT_TRUE(identical(child(e(cut(eq00(), a0, a1)), ChildIndex::at(0)), r(eq00(), e(a0), e(a1))));
}

TEST(Child, OrSetAtOmegaIndex) {
  Derivation d = refute_em();
  Derivation h = col(em_premise());
  OmegaIndex q = make_index(h, "X", forall_em());
  Derivation want = r(instantiate(forall_em(), eq_zero()), sub("X", eq_zero(), h), refute_em_instance());
  EXPECT_TRUE(alpha_equal(child(d, ChildIndex::omega(q)), want));
}

TEST(Child, AndSecondPremise) {
  Derivation e0 = ax({eq00()}), e1 = ax({eq11()});
  EXPECT_TRUE(identical(child(and_i(conj(eq00(), eq11()), e0, e1), ChildIndex::at(1)), e1));
}

TEST(Child, EwOverCut) {
  Formula c = all_refl();
  Derivation a0 = proof_ii();
  Derivation a1 = ex_i(0, negate(c), ax({eq00(), negate(eq00())}));
  Derivation got = child(ew(cut(c, a0, a1)), ChildIndex::at(0));
  EXPECT_TRUE(identical(got, e_pow(rank(c) + 1, cut(c, ew(a0), ew(a1)))));
}

TEST(Child, IndexOutOfRange) {
  Derivation d = and_i(conj(eq00(), eq11()), ax({eq00()}), ax({eq11()}));
  EXPECT_EQ(thrown([&] { child(d, ChildIndex::at(2)); }), ErrorKind::IndexOutOfRange);
  EXPECT_EQ(thrown([&] { child(ax({eq00()}), ChildIndex::at(0)); }), ErrorKind::IndexOutOfRange);
}

TEST(MakeIndex, T16Witness) {
  Scenario s = scenario("T16");
  auto q = canonical_index(s.input);
  ASSERT_TRUE(q.has_value());
  EXPECT_EQ(q->witness.kind(), DKind::Col);
  EXPECT_EQ(q->var, "X");
  EXPECT_NO_THROW(make_index(q->witness, q->var, forall_em()));
}

TEST(MakeIndex, NotCollapsed) {
  Formula lit = set_lit("X", n(0));
  EXPECT_EQ(thrown_clause([&] { make_index(ax({lit, negate(lit)}), "X", forall_em()); }), "form");
}

TEST(MakeIndex, ImproperWitness) {
  EXPECT_EQ(thrown_clause([&] { make_index(col(col(refute_em())), "X", forall_em()); }), "a");
}

TEST(MakeIndex, VariableFreeInSideFormulas) {
  Formula lit = set_lit("X", n(1));
  Derivation h = col(ax({lit, negate(lit)}));
  EXPECT_EQ(thrown([&] { make_index(h, "X", forall_em()); }), ErrorKind::InvalidOmegaIndex);
  EXPECT_EQ(thrown_clause([&] { make_index(h, "X", forall_em()); }), "c");
}

TEST(Signature, Cut) {
  Signature s = signature(ExtendedSymbol::with(SKind::CutS, eq00()));
  EXPECT_TRUE(s.principal.empty());
  EXPECT_EQ(s.arity, Arity::Finite);
  EXPECT_EQ(s.finite, 2u);
  EXPECT_EQ(s.minors(ChildIndex::at(0)), Sequent{eq00()});
  EXPECT_EQ(s.minors(ChildIndex::at(1)), Sequent{negate(eq00())});
}

TEST(Signature, Omega) {
  Signature s = signature(ExtendedSymbol::with(SKind::OmS, all_refl()));
  EXPECT_EQ(s.principal, Sequent{all_refl()});
  EXPECT_EQ(s.arity, Arity::Omega);
  EXPECT_EQ(s.minors(ChildIndex::at(4)), Sequent{eq(n(4), n(4))});
}

TEST(Signature, Rep) {
  Signature s = signature(ExtendedSymbol::rep());
  EXPECT_TRUE(s.principal.empty());
  EXPECT_EQ(s.finite, 1u);
  EXPECT_TRUE(s.minors(ChildIndex::at(0)).empty());
}

TEST(Expand, Axiom) {
  TreeView v = expand(ax({eq00()}), 3, {}, 0);
  EXPECT_EQ(v.label.kind, SKind::AxS);
  EXPECT_TRUE(v.children.empty());
  EXPECT_FALSE(v.truncated);
}

TEST(Expand, EOverCut) {
  Derivation a0 = ax({eq00()}), a1 = ax({eq00(), negate(eq00())});
  TreeView v = expand(e(cut(eq00(), a0, a1)), 2, {}, 0);
  EXPECT_EQ(v.label.kind, SKind::RepS);
  ASSERT_EQ(v.children.size(), 1u);
  EXPECT_EQ(v.children[0].second.label, rule_of(r(eq00(), e(a0), e(a1))));
}

TEST(Expand, T16Root) {
  TreeView v = expand(scenario("T16").input, 1, {}, 1);
  EXPECT_EQ(v.label.kind, SKind::OmegaTildeS);
  ASSERT_EQ(v.children.size(), 2u);
  EXPECT_FALSE(v.children[0].first.is_omega);
  EXPECT_TRUE(v.children[1].first.is_omega);
}

TEST(Expand, TruncatesAtDepth) {
  TreeView v = expand(proof_ii(), 0, {0, 1}, 0);
  EXPECT_TRUE(v.truncated);
  TreeView w = expand(proof_ii(), 1, {0, 1}, 0);
  EXPECT_FALSE(w.truncated);
  EXPECT_EQ(w.children.size(), 2u);
}

// The local properties of tp and d[i] on corpus terms and their children.
TEST(NotationProperties, CorpusIsLocallySound) {
  for (const auto& name : scenario_names()) {
    Derivation d = scenario(name).input;
    AuditVerdict v = check_local(d);
    for (const auto& f : v.failures()) ADD_FAILURE() << name << ": " << f.name << " " << f.where;
  }
}

TEST(NotationProperties, EmbeddingOnLogicalTerms) {
  testing::GenOptions opt;
  opt.logical_only = true;
  testing::Generator gen(3, opt);
  for (int k = 0; k < 300; ++k) {
    Derivation d = gen.proper_derivation();
    ASSERT_TRUE(is_logical(d.kind()));
    EXPECT_EQ(static_cast<int>(rule_of(d).kind), static_cast<int>(d.kind())) << render(d);
    if (d.kind() == DKind::AndI) {
      EXPECT_TRUE(identical(child(d, ChildIndex::at(0)), d.d0()));
      EXPECT_TRUE(identical(child(d, ChildIndex::at(1)), d.d1()));
    }
  }
}

}  // namespace
}  // namespace bi
