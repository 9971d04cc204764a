#pragma once

#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "bi/calculus.hpp"

namespace bi {

inline Derivation red(const Derivation& d);

struct OmegaIndex {
  Derivation witness;
  std::string var;
  Formula target;  // forall X A
};

struct ChildIndex {
  bool is_omega = false;
  NumTerm nat;
  std::shared_ptr<const OmegaIndex> q;

  static ChildIndex at(std::uint64_t n) {
    ChildIndex i;
    i.nat = NumTerm::numeral(n);
    return i;
  }
  static ChildIndex at(NumTerm t) {
    ChildIndex i;
    i.nat = std::move(t);
    return i;
  }
  static ChildIndex omega(OmegaIndex q) {
    ChildIndex i;
    i.is_omega = true;
    i.q = std::make_shared<const OmegaIndex>(std::move(q));
    return i;
  }

  std::string str() const {
    if (!is_omega) return nat.key();
    return "(" + std::string("q ") + q->var + ")";
  }
};

// ---------------------------------------------------------------------------
// Signatures of inference symbols

enum class Arity : std::uint8_t { Finite, Omega, OmegaIndexed };

struct Signature {
  Sequent principal;
  Arity arity = Arity::Finite;
  unsigned finite = 0;     // number of indices when finite
  bool with_zero = false;  // OmegaIndexed with the extra 0-index

  std::function<Sequent(const ChildIndex&)> minors;
};

inline Sequent principal_set(const ExtendedSymbol& s) {
  switch (s.kind) {
    case SKind::AxS: return s.delta;
    case SKind::CutS:
    case SKind::RepS:
    case SKind::OmegaTildeS: return {};
    default: return Sequent{s.formula};
  }
}

// The target forall X A of an Omega / OmegaTilde symbol.
inline Formula omega_target(const ExtendedSymbol& s) { return negate(s.formula); }

inline Sequent omega_minor(const Formula& target, const OmegaIndex& q) {
  return q.witness.end_sequent().minus(instantiate(target, q.var));
}

inline Signature signature(const ExtendedSymbol& s) {
  Signature sig;
  sig.principal = principal_set(s);
  auto out_of_range = [](const ChildIndex& i) -> Sequent {
    throw ProofError(ErrorKind::IndexOutOfRange, "index " + i.str() + " not in the index set");
  };
  switch (s.kind) {
    case SKind::AxS:
      sig.minors = out_of_range;
      break;
    case SKind::AndS:
      sig.finite = 2;
      sig.minors = [f = s.formula](const ChildIndex& i) {
        return Sequent{i.nat.value() == 0 ? f.left() : f.right()};
      };
      break;
    case SKind::OrS:
      sig.finite = 1;
      sig.minors = [f = s.formula, k = s.k](const ChildIndex&) { return Sequent{k == 0 ? f.left() : f.right()}; };
      break;
    case SKind::OmS:
      sig.arity = Arity::Omega;
      sig.minors = [f = s.formula](const ChildIndex& i) { return Sequent{instantiate(f, i.nat)}; };
      break;
    case SKind::ExS:
      sig.finite = 1;
      sig.minors = [f = s.formula, w = s.witness](const ChildIndex&) { return Sequent{instantiate(f, w)}; };
      break;
    case SKind::AllSetS:
      sig.finite = 1;
      sig.minors = [f = s.formula, y = s.eigen](const ChildIndex&) { return Sequent{instantiate(f, y)}; };
      break;
    case SKind::CutS:
      sig.finite = 2;
      sig.minors = [f = s.formula](const ChildIndex& i) {
        return Sequent{i.nat.value() == 0 ? f : negate(f)};
      };
      break;
    case SKind::RepS:
      sig.finite = 1;
      sig.minors = [](const ChildIndex&) { return Sequent{}; };
      break;
    case SKind::OmegaS:
      sig.arity = Arity::OmegaIndexed;
      sig.minors = [t = omega_target(s)](const ChildIndex& i) { return omega_minor(t, *i.q); };
      break;
    case SKind::OmegaTildeS:
      sig.arity = Arity::OmegaIndexed;
      sig.with_zero = true;
      sig.minors = [t = omega_target(s), y = s.eigen](const ChildIndex& i) {
        if (!i.is_omega) return Sequent{instantiate(t, y)};
        return omega_minor(t, *i.q);
      };
      break;
  }
  return sig;
}

// ---------------------------------------------------------------------------
// Omega indices

inline OmegaIndex make_index(const Derivation& h, const std::string& x, const Formula& target) {
  if (target.kind() != FKind::AllSet)
    throw ProofError(ErrorKind::IllFormed, "omega index target must be a set universal");
  if (!h.well_formed()) throw ProofError(ErrorKind::IllFormed, h.malformation());
  if (h.kind() != DKind::Col)
    throw ProofError(ErrorKind::InvalidOmegaIndex, "witness is not of the form col(h0)", "", "form");
  ProperReport pr = is_proper(h);
  if (!pr.ok)
    throw ProofError(ErrorKind::InvalidOmegaIndex, "witness is not proper: " + pr.reason, pr.path, "a");
  OmegaIndex q{h, x, target};
  Sequent delta = omega_minor(target, q);
  if (delta.free_vars().set.count(x))
    throw ProofError(ErrorKind::InvalidOmegaIndex, x + " occurs free in the side formulas of the witness", "", "c");
  return q;
}

// ---------------------------------------------------------------------------
// tp

namespace detail {

inline Unify member_of(const Sequent& s, const Formula& f, bool& sensitive) {
  Unify u = member(s, f);
  if (u == Unify::Maybe) sensitive = true;
  return u;
}

inline ExtendedSymbol relabel(ExtendedSymbol s, const std::string& x, const Abstraction& t) {
  s.delta = subst_set(s.delta, x, t);
  if (s.formula.valid()) s.formula = subst_set(s.formula, x, t);
  return s;
}

inline RuleInfo compute_rule(const Derivation& d);

// While a symbolic scope is open, any symbol whose computation depended on
// the value of a free number variable aborts the computation.
struct SymbolicAbort {};
inline thread_local unsigned symbolic_depth = 0;

struct SymbolicScope {
  SymbolicScope() { ++symbolic_depth; }
  ~SymbolicScope() { --symbolic_depth; }
  SymbolicScope(const SymbolicScope&) = delete;
  SymbolicScope& operator=(const SymbolicScope&) = delete;
};

inline const RuleInfo& info_of(const Derivation& d) {
  const DerivNode& n = d.node();
  std::call_once(n.rule_once, [&] { n.rule = compute_rule(d); });
  if (symbolic_depth && n.rule->sensitive) throw SymbolicAbort{};
  return *n.rule;
}

inline RuleInfo compute_rule(const Derivation& d) {
  if (!d.well_formed()) throw ProofError(ErrorKind::IllFormed, d.malformation());
  RuleInfo out;
  switch (d.kind()) {
    case DKind::Ax: out.symbol = ExtendedSymbol::ax(d.delta()); return out;
    case DKind::AndI: out.symbol = ExtendedSymbol::with(SKind::AndS, d.formula()); return out;
    case DKind::OrI:
      out.symbol = ExtendedSymbol::with(SKind::OrS, d.formula());
      out.symbol.k = d.k();
      return out;
    case DKind::OmI: out.symbol = ExtendedSymbol::with(SKind::OmS, d.formula()); return out;
    case DKind::ExI:
      out.symbol = ExtendedSymbol::with(SKind::ExS, d.formula());
      out.symbol.witness = d.witness();
      return out;
    case DKind::AllSetI:
      out.symbol = ExtendedSymbol::with(SKind::AllSetS, d.formula());
      out.symbol.eigen = d.var();
      return out;
    case DKind::OrSetI: out.symbol = ExtendedSymbol::with(SKind::OmegaS, d.formula()); return out;
    case DKind::Cut: out.symbol = ExtendedSymbol::with(SKind::CutS, d.formula()); return out;
    case DKind::E:
    case DKind::Ew: {
      const RuleInfo& t0 = info_of(d.d0());
      out.sensitive = t0.sensitive;
      out.symbol = t0.symbol.kind == SKind::CutS ? ExtendedSymbol::rep() : t0.symbol;
      return out;
    }
    case DKind::Col: {
      const RuleInfo& t0 = info_of(d.d0());
      out.sensitive = t0.sensitive;
      if (t0.symbol.kind == SKind::CutS || t0.symbol.kind == SKind::OmegaS)
        throw ProofError(ErrorKind::Improper, "col over a cut or omega symbol", "", "clause 1");
      out.symbol = t0.symbol.kind == SKind::OmegaTildeS ? ExtendedSymbol::rep() : t0.symbol;
      return out;
    }
    case DKind::Sub: {
      const RuleInfo& t0 = info_of(d.d0());
      out.sensitive = t0.sensitive;
      SKind k = t0.symbol.kind;
      if (k == SKind::CutS || k == SKind::OmegaS || k == SKind::OmegaTildeS)
        throw ProofError(ErrorKind::Improper, "sub over a cut or omega symbol", "", "clause 2");
      out.symbol = relabel(t0.symbol, d.var(), d.abs());
      return out;
    }
    case DKind::R: break;
  }

  const Formula& a = d.formula();
  const RuleInfo& t0 = info_of(d.d0());
  bool sens = t0.sensitive;
  if (detail::member_of(principal_set(t0.symbol), a, sens) != Unify::Same) {
    out.symbol = t0.symbol;
    out.rcase = RCase::PassLeft;
    out.sensitive = sens;
    return out;
  }
  const RuleInfo& t1 = info_of(d.d1());
  sens = sens || t1.sensitive;
  Formula na = negate(a);
  if (detail::member_of(principal_set(t1.symbol), na, sens) != Unify::Same) {
    out.symbol = t1.symbol;
    out.rcase = RCase::PassRight;
    out.sensitive = sens;
    return out;
  }
  out.sensitive = sens;
  if (t0.symbol.kind == SKind::AxS && detail::member_of(t0.symbol.delta, na, out.sensitive) == Unify::Same) {
    out.symbol = ExtendedSymbol::rep();
    out.rcase = RCase::AxLeft;
    return out;
  }
  if (t1.symbol.kind == SKind::AxS && detail::member_of(t1.symbol.delta, a, out.sensitive) == Unify::Same) {
    out.symbol = ExtendedSymbol::rep();
    out.rcase = RCase::AxRight;
    return out;
  }
  if (t0.symbol.kind == SKind::AxS || t1.symbol.kind == SKind::AxS)
    throw ProofError(ErrorKind::InternalInconsistency,
                     "r over a true-literal axiom whose complement is principal on the other side");

  bool negative = a.kind() == FKind::And || a.kind() == FKind::AllNum || a.kind() == FKind::AllSet;
  out.swapped = !negative;
  out.rcase = RCase::Principal;
  const Formula& nf = negative ? a : na;
  const ExtendedSymbol& tn = negative ? t0.symbol : t1.symbol;
  const ExtendedSymbol& tp = negative ? t1.symbol : t0.symbol;
  switch (nf.kind()) {
    case FKind::And:
      if (tn.kind == SKind::AndS && tp.kind == SKind::OrS) {
        out.symbol = ExtendedSymbol::with(SKind::CutS, tp.k == 0 ? nf.left() : nf.right());
        return out;
      }
      break;
    case FKind::AllNum:
      if (tn.kind == SKind::OmS && tp.kind == SKind::ExS) {
        out.symbol = ExtendedSymbol::with(SKind::CutS, instantiate(nf, tp.witness));
        return out;
      }
      break;
    case FKind::AllSet:
      if (tn.kind == SKind::AllSetS && tp.kind == SKind::OmegaS) {
        out.symbol = ExtendedSymbol::with(SKind::OmegaTildeS, negate(nf));
        out.symbol.eigen = tn.eigen;
        return out;
      }
      break;
    default: break;
  }
  throw ProofError(ErrorKind::UnsupportedOrientation,
                   "r principal case with symbols " + std::string(to_string(t0.symbol.kind)) + " / " +
                       to_string(t1.symbol.kind) + " on " + a.key());
}

}  // namespace detail

inline const ExtendedSymbol& rule_of(const Derivation& d) { return detail::info_of(d).symbol; }
inline const RuleInfo& rule_info(const Derivation& d) { return detail::info_of(d); }

// ---------------------------------------------------------------------------
// d[i]

inline Derivation premise_at(const PremiseFamily& f, const NumTerm& n);

namespace detail {

inline Derivation child_raw(const Derivation& d, const ChildIndex& i);

inline Derivation child_nat(const Derivation& d, std::uint64_t n) { return child_raw(d, ChildIndex::at(n)); }

inline Derivation canonical_omega_child(const Derivation& d0, const ExtendedSymbol& t0) {
  // d0 has symbol OmegaTilde^Y; returns d0[(col(d0[0]), Y)].
  OmegaIndex q;
  try {
    q = make_index(col(child_nat(d0, 0)), t0.eigen, omega_target(t0));
  } catch (const ProofError& e) {
    throw ProofError(ErrorKind::InternalInconsistency, std::string("canonical omega index rejected: ") + e.what());
  }
  return child_raw(d0, ChildIndex::omega(std::move(q)));
}

inline Derivation child_raw(const Derivation& d, const ChildIndex& i) {
  const RuleInfo& info = rule_info(d);
  auto nat = [&]() -> std::uint64_t { return i.nat.value(); };
  switch (d.kind()) {
    case DKind::Ax: throw ProofError(ErrorKind::IndexOutOfRange, "axioms have no premises");
    case DKind::AndI: return nat() == 0 ? d.d0() : d.d1();
    case DKind::OrI:
    case DKind::ExI:
    case DKind::AllSetI: return d.d0();
    case DKind::OmI: return premise_at(d.family(), i.nat);
    case DKind::OrSetI: {
      Formula target = negate(d.formula());
      return r(instantiate(target, d.abs()), sub(i.q->var, d.abs(), i.q->witness), d.d0());
    }
    case DKind::Cut: return nat() == 0 ? d.d0() : d.d1();
    case DKind::E: {
      const ExtendedSymbol& t0 = rule_info(d.d0()).symbol;
      if (t0.kind == SKind::CutS)
        return r(t0.formula, e(child_nat(d.d0(), 0)), e(child_nat(d.d0(), 1)));
      return e(child_raw(d.d0(), i));
    }
    case DKind::Ew: {
      const ExtendedSymbol& t0 = rule_info(d.d0()).symbol;
      if (t0.kind == SKind::CutS)
        return e_pow(t0.formula.rank() + 1, cut(t0.formula, ew(child_nat(d.d0(), 0)), ew(child_nat(d.d0(), 1))));
      return ew(child_raw(d.d0(), i));
    }
    case DKind::Col: {
      const ExtendedSymbol& t0 = rule_info(d.d0()).symbol;
      if (t0.kind == SKind::OmegaTildeS) return col(canonical_omega_child(d.d0(), t0));
      return col(child_raw(d.d0(), i));
    }
    case DKind::Sub: return sub(d.var(), d.abs(), child_raw(d.d0(), i));
    case DKind::R: break;
  }

  const Formula& a = d.formula();
  switch (info.rcase) {
    case RCase::PassLeft: return r(a, child_raw(d.d0(), i), d.d1());
    case RCase::PassRight: return r(a, d.d0(), child_raw(d.d1(), i));
    case RCase::AxLeft: return d.d1();
    case RCase::AxRight: return d.d0();
    case RCase::Principal: break;
    case RCase::None: throw ProofError(ErrorKind::InternalInconsistency, "r node without an r clause");
  }
  Formula nf = info.swapped ? negate(a) : a;
  const Derivation& dn = info.swapped ? d.d1() : d.d0();
  const Derivation& dp = info.swapped ? d.d0() : d.d1();
  const ExtendedSymbol& tp = rule_info(dp).symbol;
  bool first = !i.is_omega && nat() == 0;
  if (info.symbol.kind == SKind::CutS) {
    if (first) {
      ChildIndex k = nf.kind() == FKind::And ? ChildIndex::at(tp.k) : ChildIndex::at(tp.witness);
      return r(nf, child_raw(dn, k), dp);
    }
    return r(nf, dn, child_nat(dp, 0));
  }
  // OmegaTilde
  if (first) return r(nf, child_nat(dn, 0), dp);
  return r(nf, dn, child_raw(dp, i));
}

}  // namespace detail

inline void check_index(const ExtendedSymbol& s, const ChildIndex& i) {
  Signature sig = signature(s);
  auto bad = [&](const std::string& why) {
    throw ProofError(ErrorKind::IndexOutOfRange, "index " + i.str() + " invalid for " + to_string(s.kind) + ": " + why);
  };
  switch (sig.arity) {
    case Arity::Finite:
      if (i.is_omega) bad("expected a number");
      if (!i.nat.closed()) bad("expected a numeral");
      if (i.nat.value() >= sig.finite) bad("out of range");
      return;
    case Arity::Omega:
      if (i.is_omega) bad("expected a number");
      if (i.nat.base == NumTerm::Base::Bound) bad("expected a numeral");
      return;
    case Arity::OmegaIndexed:
      if (!i.is_omega) {
        if (sig.with_zero && i.nat.closed() && i.nat.value() == 0) return;
        bad("expected an omega index");
      }
      if (!i.q || !i.q->witness.valid()) bad("empty omega index");
      if (i.q->target != omega_target(s)) bad("omega index addresses a different formula");
      make_index(i.q->witness, i.q->var, i.q->target);
      return;
  }
}

// d[i]. Public entry: validates the index, then descends lazily.
inline Derivation child(const Derivation& d, const ChildIndex& i) {
  check_index(rule_of(d), i);
  return detail::child_raw(d, i);
}

inline Derivation premise_at(const PremiseFamily& f, const NumTerm& n) {
  switch (f.kind()) {
    case FamKind::Template: return instantiate_template(f, n);
    case FamKind::Selector: return detail::child_raw(f.parent(), ChildIndex::at(n));
    case FamKind::MapRed: return red(premise_at(f.inner(), n));
  }
  throw ProofError(ErrorKind::IllFormed, "unknown premise family");
}

inline Derivation premise_at(const PremiseFamily& f, std::uint64_t n) { return premise_at(f, NumTerm::numeral(n)); }

// The witness the reduction itself uses for an OmegaTilde symbol.
inline std::optional<OmegaIndex> canonical_index(const Derivation& d) {
  const ExtendedSymbol& s = rule_of(d);
  if (s.kind != SKind::OmegaTildeS) return std::nullopt;
  try {
    return make_index(col(detail::child_nat(d, 0)), s.eigen, omega_target(s));
  } catch (const ProofError&) {
    return std::nullopt;
  }
}

// ---------------------------------------------------------------------------
// Lazy finite views of g(d)

struct TreeView {
  ExtendedSymbol label;
  Sequent sequent;
  std::vector<std::pair<ChildIndex, TreeView>> children;
  bool truncated = false;
};

struct ExpandOptions {
  unsigned depth = 3;
  std::vector<std::uint64_t> omega_picks = {0, 1, 2};
  unsigned witness_budget = 1;
  // Extra witnesses for Omega symbols, tried against every Omega node.
  std::vector<std::pair<Derivation, std::string>> witnesses;
};

inline TreeView expand(const Derivation& d, const ExpandOptions& opt) {
  TreeView v;
  v.label = rule_of(d);
  v.sequent = d.end_sequent();
  Signature sig = signature(v.label);
  std::vector<ChildIndex> idx;
  switch (sig.arity) {
    case Arity::Finite:
      for (unsigned k = 0; k < sig.finite; ++k) idx.push_back(ChildIndex::at(k));
      break;
    case Arity::Omega:
      for (auto k : opt.omega_picks) idx.push_back(ChildIndex::at(k));
      break;
    case Arity::OmegaIndexed: {
      unsigned budget = opt.witness_budget;
      if (sig.with_zero) {
        idx.push_back(ChildIndex::at(0));
        if (budget > 0)
          if (auto q = canonical_index(d)) {
            idx.push_back(ChildIndex::omega(*q));
            --budget;
          }
      }
      for (const auto& [h, x] : opt.witnesses) {
        if (budget == 0) break;
        try {
          idx.push_back(ChildIndex::omega(make_index(h, x, omega_target(v.label))));
          --budget;
        } catch (const ProofError&) {
        }
      }
      break;
    }
  }
  if (idx.empty()) return v;
  if (opt.depth == 0) {
    v.truncated = true;
    return v;
  }
  ExpandOptions sub = opt;
  sub.depth = opt.depth - 1;
  for (auto& i : idx) {
    Derivation c = detail::child_raw(d, i);
    v.children.emplace_back(i, expand(c, sub));
  }
  return v;
}

inline TreeView expand(const Derivation& d, unsigned depth, std::vector<std::uint64_t> omega_picks,
                       unsigned witness_budget) {
  ExpandOptions opt;
  opt.depth = depth;
  opt.omega_picks = std::move(omega_picks);
  opt.witness_budget = witness_budget;
  return expand(d, opt);
}

}  // namespace bi

#include "bi/reduction.hpp"
