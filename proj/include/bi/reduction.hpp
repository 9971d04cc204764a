#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bi/notation.hpp"

namespace bi {

struct GateReport {
  bool proper = false;
  bool pi1_end = false;
  bool degree_zero = false;
  bool tp_ok = false;

  bool all() const { return proper && pi1_end && degree_zero && tp_ok; }
};

inline GateReport gate(const Derivation& d) {
  GateReport g;
  g.proper = is_proper(d).ok;
  g.pi1_end = d.end_sequent().is_pi1();
  g.degree_zero = d.degree() == 0;
  if (g.proper) {
    SKind k = rule_of(d).kind;
    g.tp_ok = k != SKind::CutS && k != SKind::OmegaS;
  }
  if (g.proper && g.pi1_end && g.degree_zero && !g.tp_ok)
    throw ProofError(ErrorKind::InternalInconsistency,
                     std::string("gate-eligible derivation has symbol ") + to_string(rule_of(d).kind));
  return g;
}

inline void require_gate(const Derivation& d) {
  GateReport g = gate(d);
  if (g.all()) return;
  std::string why;
  if (!g.proper) why += " improper";
  if (!g.pi1_end) why += " end-sequent-not-pi1";
  if (!g.degree_zero) why += " degree=" + std::to_string(d.degree());
  if (g.proper && !g.tp_ok) why += " symbol";
  throw ProofError(ErrorKind::GateFailed, "reduction precondition fails:" + why);
}

// Names of the red clauses, in the order they are tried.
namespace clause {
inline constexpr const char* ax = "ax";
inline constexpr const char* logical_root = "logical-root";
inline constexpr const char* logical_lift = "logical-lift";
inline constexpr const char* rep = "rep";
inline constexpr const char* omega_tilde = "omega-tilde";
}  // namespace clause

struct RedResult {
  Derivation term;
  const char* clause = "";
  ExtendedSymbol label;
};

namespace detail {

inline RedResult red_unchecked(const Derivation& d);

inline Derivation red_child(const Derivation& c) { return red_unchecked(c).term; }

inline RedResult red_unchecked(const Derivation& d) {
  const ExtendedSymbol& s = rule_of(d);
  RedResult out;
  out.label = s;
  if (s.kind == SKind::AxS) {
    out.clause = clause::ax;
    out.term = d.kind() == DKind::Ax ? d : ax(s.delta);
    return out;
  }
  if (is_logical(d.kind())) {
    out.clause = clause::logical_root;
    switch (d.kind()) {
      case DKind::AndI: out.term = and_i(d.formula(), red_child(d.d0()), red_child(d.d1())); break;
      case DKind::OrI: out.term = or_i(d.k(), d.formula(), red_child(d.d0())); break;
      case DKind::OmI: out.term = om_i(d.formula(), map_red(d.family())); break;
      case DKind::ExI: out.term = ex_i(d.witness(), d.formula(), red_child(d.d0())); break;
      case DKind::AllSetI: out.term = all_set_i(d.var(), d.formula(), red_child(d.d0())); break;
      default: break;
    }
    return out;
  }
  switch (s.kind) {
    case SKind::AndS:
      out.clause = clause::logical_lift;
      out.term = and_i(s.formula, child_nat(d, 0), child_nat(d, 1));
      return out;
    case SKind::OrS:
      out.clause = clause::logical_lift;
      out.term = or_i(s.k, s.formula, child_nat(d, 0));
      return out;
    case SKind::OmS:
      out.clause = clause::logical_lift;
      out.term = om_i(s.formula, selector(d));
      return out;
    case SKind::ExS:
      out.clause = clause::logical_lift;
      out.term = ex_i(s.witness, s.formula, child_nat(d, 0));
      return out;
    case SKind::AllSetS:
      out.clause = clause::logical_lift;
      out.term = all_set_i(s.eigen, s.formula, child_nat(d, 0));
      return out;
    case SKind::RepS:
      out.clause = clause::rep;
      out.term = child_nat(d, 0);
      return out;
    case SKind::OmegaTildeS:
      out.clause = clause::omega_tilde;
      out.term = canonical_omega_child(d, s);
      return out;
    default:
      throw ProofError(ErrorKind::InternalInconsistency,
                       std::string("red reached symbol ") + to_string(s.kind));
  }
}

}  // namespace detail

inline RedResult red_step(const Derivation& d) {
  require_gate(d);
  return detail::red_unchecked(d);
}

inline Derivation red(const Derivation& d) { return red_step(d).term; }

// ---------------------------------------------------------------------------
// Normal forms

namespace detail {

inline bool is_fixed(const Derivation& d);

inline bool family_fixed(const PremiseFamily& f) {
  switch (f.kind()) {
    case FamKind::Template: return is_fixed(f.schema());
    case FamKind::Selector: return false;
    case FamKind::MapRed: return family_fixed(f.inner());
  }
  return false;
}

// red(d) equals d, where map-red(f) counts as f when f's premises are
// fixed points themselves.
inline bool same_after_red(const Derivation& reduced, const Derivation& d) {
  if (reduced.get() == d.get()) return true;
  if (reduced.kind() != d.kind()) return false;
  switch (d.kind()) {
    case DKind::Ax: return reduced.delta() == d.delta();
    case DKind::AndI:
      return reduced.formula() == d.formula() && same_after_red(reduced.d0(), d.d0()) &&
             same_after_red(reduced.d1(), d.d1());
    case DKind::OrI:
    case DKind::ExI:
    case DKind::AllSetI:
      return reduced.formula() == d.formula() && reduced.k() == d.k() && reduced.witness() == d.witness() &&
             reduced.var() == d.var() && same_after_red(reduced.d0(), d.d0());
    case DKind::OmI: {
      const PremiseFamily& rf = reduced.family();
      if (rf.kind() == FamKind::MapRed && rf.inner().get() == d.family().get()) return family_fixed(d.family());
      return alpha_equal(rf, d.family());
    }
    default: return alpha_equal(reduced, d);
  }
}

inline bool is_fixed(const Derivation& d) {
  if (contains_kind(d, {DKind::Cut, DKind::R})) return false;
  return same_after_red(red_unchecked(d).term, d);
}

}  // namespace detail

inline bool is_cut_free(const Derivation& d) {
  require_gate(d);
  return detail::is_fixed(d);
}

inline Derivation prepare(const Derivation& d) {
  if (!d.well_formed()) throw ProofError(ErrorKind::IllFormed, d.malformation());
  if (!is_bi_minus(d)) throw ProofError(ErrorKind::NotBIMinus, "derivation uses r, e, ew, col, sub or a lazy family");
  if (!d.end_sequent().is_pi1()) throw ProofError(ErrorKind::NotPi1EndSequent, "end-sequent contains a set existential");
  return ew(d);
}

// ---------------------------------------------------------------------------
// Normalization

struct TraceStep {
  std::size_t index = 0;
  std::string path;
  std::string clause;
  ExtendedSymbol label;
  Derivation before;  // focus before the step
  Derivation after;   // focus after the step
  Derivation global;  // whole term after the step
};

struct Trace {
  Derivation input;
  std::vector<TraceStep> steps;
  Derivation final;
  bool budget_exhausted = false;
  unsigned lazy_families = 0;  // omega families left unnormalized
};

namespace detail {

struct Normalizer {
  std::size_t max_steps;
  Trace trace;
  struct Frame {
    Derivation parent;
    int slot;  // 0, 1: stored premise; 2: template schema
  };
  std::vector<Frame> frames;
  unsigned counter = 0;
  std::set<std::string> names;

  static Derivation plug(const Derivation& p, int slot, const Derivation& c) {
    switch (p.kind()) {
      case DKind::AndI: return slot == 0 ? and_i(p.formula(), c, p.d1()) : and_i(p.formula(), p.d0(), c);
      case DKind::OrI: return or_i(p.k(), p.formula(), c);
      case DKind::ExI: return ex_i(p.witness(), p.formula(), c);
      case DKind::AllSetI: return all_set_i(p.var(), p.formula(), c);
      case DKind::OmI: return om_i(p.formula(), template_family(p.family().param(), c));
      default: throw ProofError(ErrorKind::InternalInconsistency, "cannot plug into this node");
    }
  }

  Derivation global(const Derivation& focus) const {
    Derivation cur = focus;
    for (auto it = frames.rbegin(); it != frames.rend(); ++it) cur = plug(it->parent, it->slot, cur);
    return cur;
  }

  std::string fresh_param() {
    for (;;) {
      std::string c = "n" + std::to_string(counter++);
      if (names.insert(c).second) return c;
    }
  }

  const RuleInfo& info(const Derivation& d) { return rule_info(d); }

  Derivation with_frame(const Derivation& parent, int slot, const Derivation& c, const std::string& path) {
    frames.push_back({parent, slot});
    Derivation out;
    try {
      out = run(c, path);
    } catch (...) {
      frames.pop_back();
      throw;
    }
    frames.pop_back();
    return out;
  }

  // Normalizes an omega family symbolically: the schema is reduced with its
  // parameter left as a variable. Gives up (leaving the family as it was)
  // when some decision depends on the parameter's value.
  Derivation family(const Derivation& d, const std::string& path) {
    const PremiseFamily& f = d.family();
    std::size_t mark = trace.steps.size();
    unsigned lazy = trace.lazy_families;
    SymbolicScope scope;
    try {
      std::string param;
      Derivation schema;
      if (f.kind() == FamKind::Template) {
        param = f.param();
        schema = f.schema();
      } else {
        param = fresh_param();
        schema = premise_at(f, NumTerm::var(param));
      }
      Derivation seed = om_i(d.formula(), template_family(param, schema));
      Derivation out = with_frame(seed, 2, schema, join_path(path, "t"));
      Derivation result = om_i(d.formula(), template_family(param, out));
      if (!result.well_formed()) throw SymbolicAbort{};
      return result;
    } catch (const SymbolicAbort&) {
    } catch (const ProofError&) {
    }
    trace.steps.resize(mark);
    trace.lazy_families = lazy + 1;
    return d;
  }

  Derivation run(Derivation d, const std::string& path) {
    for (;;) {
      const RuleInfo& i = info(d);
      if (i.symbol.kind == SKind::AxS && d.kind() == DKind::Ax) return d;
      if (is_logical(d.kind())) {
        if (d.d0().valid()) d = plug(d, 0, with_frame(d, 0, d.d0(), join_path(path, "0")));
        if (d.d1().valid()) d = plug(d, 1, with_frame(d, 1, d.d1(), join_path(path, "1")));
        if (d.kind() == DKind::OmI) d = family(d, path);
        return d;
      }
      if (trace.steps.size() >= max_steps) {
        trace.budget_exhausted = true;
        return d;
      }
      RedResult res = red_unchecked(d);
      TraceStep st;
      st.index = trace.steps.size();
      st.path = path;
      st.clause = res.clause;
      st.label = res.label;
      st.before = d;
      st.after = res.term;
      st.global = global(res.term);
      trace.steps.push_back(std::move(st));
      d = res.term;
      if (trace.budget_exhausted) return d;
    }
  }
};

}  // namespace detail

inline Trace normalize(const Derivation& d, std::size_t max_steps = 10000) {
  require_gate(d);
  detail::Normalizer n;
  n.max_steps = max_steps;
  n.names = all_names(d).num;
  n.trace.input = d;
  n.trace.final = n.run(d, "");
  return std::move(n.trace);
}

}  // namespace bi
