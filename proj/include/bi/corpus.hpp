#pragma once

#include <string>
#include <utility>
#include <vector>

#include "bi/syntax.hpp"

namespace bi {

struct Scenario {
  std::string name;
  Derivation input;
  Derivation expected_red;
  ExtendedSymbol expected_tp;
};

namespace corpus {

inline NumTerm n(std::uint64_t k) { return NumTerm::numeral(k); }
inline Formula eq00() { return eq(n(0), n(0)); }
inline Formula eq11() { return eq(n(1), n(1)); }
inline Formula lt00() { return lt(n(0), n(0)); }

// X(0) v ~X(0) and its universal closure.
inline Formula excluded_middle(const std::string& x) {
  Formula lit = set_lit(x, n(0));
  return disj(lit, negate(lit));
}
inline Formula forall_em() { return forall_set("X", excluded_middle("X")); }

// T = \x. eq(x, 0)
inline Abstraction eq_zero() { return abstraction("x", eq(NumTerm::var("x"), n(0))); }

// |- X(0) v ~X(0) by two disjunction introductions.
inline Derivation em_premise() {
  Formula lit = set_lit("X", n(0));
  Formula f = excluded_middle("X");
  return or_i(1, f, or_i(0, f, ax({lit, negate(lit)})));
}

// |- ~(eq(0,0) v ~eq(0,0)), eq(0,0)
inline Derivation refute_em_instance() {
  Formula f = negate(instantiate(forall_em(), eq_zero()));
  return and_i(f, ax({eq00(), negate(eq00())}), ax({eq00()}));
}

// |- EX ~(X(0) v ~X(0)), eq(0,0)
inline Derivation refute_em() { return or_set_i(eq_zero(), negate(forall_em()), refute_em_instance()); }

inline Derivation proof_i() { return all_set_i("X", forall_em(), em_premise()); }

inline Formula all_refl() {
  NumTerm x = NumTerm::var("x");
  return forall_num("x", eq(x, x));
}

inline Derivation proof_ii() {
  NumTerm v = NumTerm::var("v");
  return om_i(all_refl(), template_family("v", ax({eq(v, v)})));
}

inline Derivation proof_iii() { return cut(forall_em(), proof_i(), refute_em()); }

inline Derivation cut_example() { return cut(eq00(), ax({eq00()}), ax({eq00(), negate(eq00())})); }

}  // namespace corpus

inline std::vector<std::pair<std::string, Derivation>> sample_proofs() {
  return {
      {"excluded-middle", corpus::proof_i()},
      {"reflexivity", corpus::proof_ii()},
      {"impredicative-cut", corpus::proof_iii()},
      {"cut-example", corpus::cut_example()},
  };
}

inline const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = {"T9",  "T10", "T11", "T12",  "T13",
                                                 "T14", "T15", "T15b", "T16"};
  return names;
}

namespace detail {

using namespace corpus;

inline Scenario t9() {
  Formula c = eq00();
  Derivation d0 = ax({c}), d1 = ax({c, negate(c)});
  return {"T9", e(cut(c, d0, d1)), r(c, e(d0), e(d1)), ExtendedSymbol::rep()};
}

inline Scenario t10() {
  Formula c = lt00();
  Derivation d1 = ax({negate(c)});
  return {"T10", r(c, ax({c, negate(c)}), d1), d1, ExtendedSymbol::rep()};
}

// The conjunction cut shared by T11 and T12: C = C0 & C1 against
// (~C0 v ~C1) introduced from its left disjunct.
struct ConjCut {
  Formula c;
  Derivation d00, d000, d001, d01, d010;
};

inline ConjCut conj_cut(Formula c0, Derivation d000, Derivation d010) {
  ConjCut k;
  k.c = conj(c0, eq11());
  k.d000 = std::move(d000);
  k.d001 = ax({eq11()});
  k.d00 = and_i(k.c, k.d000, k.d001);
  k.d010 = std::move(d010);
  k.d01 = or_i(0, negate(k.c), k.d010);
  return k;
}

inline Scenario t11() {
  ConjCut k = conj_cut(eq00(), ax({eq00()}), ax({eq00(), negate(eq00())}));
  Formula ck = k.c.left();
  Derivation expected = r(ck, e(r(k.c, k.d000, k.d01)), e(r(k.c, k.d00, k.d010)));
  return {"T11", e(r(k.c, k.d00, k.d01)), expected, ExtendedSymbol::rep()};
}

inline Scenario t12() {
  Formula c0 = disj(eq00(), lt00());
  Formula nc0 = negate(c0);
  ConjCut k = conj_cut(c0, or_i(0, c0, ax({eq00()})),
                       and_i(nc0, ax({eq00(), negate(eq00())}), ax({negate(lt00())})));
  Derivation expected =
      e_pow(rank(c0) + 1, cut(c0, ew(r(k.c, k.d000, k.d01)), ew(r(k.c, k.d00, k.d010))));
  return {"T12", ew(r(k.c, k.d00, k.d01)), expected, ExtendedSymbol::rep()};
}

inline Scenario t13() {
  Formula c = all_refl();
  Derivation d00 = proof_ii();
  Derivation d010 = ax({eq00()});
  Derivation d01 = ex_i(1, negate(c), d010);
  Formula ck = eq11();
  Derivation d00k = ax({ck});
  Derivation expected = r(ck, e(r(c, d00k, d01)), e(r(c, d00, d010)));
  return {"T13", e(r(c, d00, d01)), expected, ExtendedSymbol::rep()};
}

inline Scenario t14() {
  NumTerm x = NumTerm::var("x"), v = NumTerm::var("v");
  Formula c = forall_num("x", disj(eq(x, x), lt(x, n(0))));
  Formula cv = disj(eq(v, v), lt(v, n(0)));
  Derivation d00 = om_i(c, template_family("v", or_i(0, cv, ax({eq(v, v)}))));
  Formula ck = instantiate(c, n(0));
  Derivation d010 = and_i(negate(ck), ax({eq00(), negate(eq00())}), ax({negate(lt00())}));
  Derivation d01 = ex_i(0, negate(c), d010);
  Derivation d00k = or_i(0, ck, ax({eq00()}));
  Derivation expected = e_pow(rank(ck) + 1, cut(ck, ew(r(c, d00k, d01)), ew(r(c, d00, d010))));
  return {"T14", ew(r(c, d00, d01)), expected, ExtendedSymbol::rep()};
}

// T15 with the given operator in place of E_w; T15b uses E.
inline Scenario t15(const std::string& name, DKind op) {
  Formula c = forall_em();
  Abstraction t = eq_zero();
  Derivation d000 = proof_i(), d0000 = em_premise();
  Derivation d001 = refute_em(), d0010 = refute_em_instance();
  Derivation input = col(unary(op, r(c, d000, d001)));
  Derivation dq = col(unary(op, r(c, d0000, d001)));
  Derivation expected = col(unary(op, r(c, d000, r(instantiate(c, t), sub("X", t, dq), d0010))));
  return {name, input, expected, ExtendedSymbol::rep()};
}

inline Scenario t16() {
  Formula c = forall_em();
  Abstraction t = eq_zero();
  Formula ct = instantiate(c, t);
  Derivation d00 = proof_i(), d000 = em_premise();
  Derivation d01 = refute_em(), d010 = refute_em_instance();
  unsigned m1 = rank(ct);
  Derivation input = e_pow(m1, r(c, d00, d01));
  Derivation dq = col(e_pow(m1, r(c, d000, d01)));
  Derivation expected = e_pow(m1, r(c, d00, r(ct, sub("X", t, dq), d010)));
  ExtendedSymbol tp = ExtendedSymbol::with(SKind::OmegaTildeS, negate(c));
  tp.eigen = "X";
  return {"T16", input, expected, tp};
}

}  // namespace detail

inline Scenario scenario(const std::string& name) {
  if (name == "T9") return detail::t9();
  if (name == "T10") return detail::t10();
  if (name == "T11") return detail::t11();
  if (name == "T12") return detail::t12();
  if (name == "T13") return detail::t13();
  if (name == "T14") return detail::t14();
  if (name == "T15") return detail::t15("T15", DKind::Ew);
  if (name == "T15b") return detail::t15("T15b", DKind::E);
  if (name == "T16") return detail::t16();
  throw ProofError(ErrorKind::IndexOutOfRange, "unknown scenario '" + name + "'");
}

}  // namespace bi
