#pragma once

#include <string>
#include <vector>

#include "bi/reduction.hpp"
#include "bi/syntax.hpp"

namespace bi {

struct Check {
  std::string name;
  bool pass = true;
  std::string where;  // path, index or detail of a failure
};

struct AuditVerdict {
  std::vector<Check> checks;
  bool overall = true;

  void add(std::string name, bool pass, std::string where = "") {
    overall = overall && pass;
    checks.push_back({std::move(name), pass, pass ? std::string() : std::move(where)});
  }
  void merge(const AuditVerdict& o, const std::string& prefix = "") {
    for (const auto& c : o.checks) add(c.name, c.pass, prefix.empty() ? c.where : join_path(prefix, c.where));
  }
  std::vector<Check> failures() const {
    std::vector<Check> out;
    for (const auto& c : checks)
      if (!c.pass) out.push_back(c);
    return out;
  }
};

struct AuditOptions {
  std::vector<std::uint64_t> omega_picks = {0, 1, 2};
  bool canonical_omega = true;
  // For Omega symbols, which have no canonical index: also try the index
  // (col(ax {eq(0,0)}), X), valid for every target.
  bool trivial_omega = true;
  // End-sequents are minimal (weakening is built into every rule), so a step
  // may drop side formulas; by default a step passes when the new
  // end-sequent is contained in the old one. exact demands equality.
  bool exact = false;
};

// Finite indices in full, omega indices at the picks, Omega indices at the
// canonical witness.
inline std::vector<ChildIndex> sample_indices(const Derivation& d, const AuditOptions& opt = {}) {
  const ExtendedSymbol& s = rule_of(d);
  Signature sig = signature(s);
  std::vector<ChildIndex> out;
  switch (sig.arity) {
    case Arity::Finite:
      for (unsigned k = 0; k < sig.finite; ++k) out.push_back(ChildIndex::at(k));
      break;
    case Arity::Omega:
      for (auto k : opt.omega_picks) out.push_back(ChildIndex::at(k));
      break;
    case Arity::OmegaIndexed:
      if (sig.with_zero) out.push_back(ChildIndex::at(0));
      if (opt.canonical_omega)
        if (auto q = canonical_index(d)) out.push_back(ChildIndex::omega(*q));
      if (opt.trivial_omega && s.kind == SKind::OmegaS) {
        Formula target = omega_target(s);
        FreeVars used = all_names(d);
        std::string x = detail::fresh_name("X", [&](const std::string& c) { return used.set.count(c) > 0; });
        out.push_back(ChildIndex::omega(make_index(col(ax({eq(NumTerm::zero(), NumTerm::zero())})), x, target)));
      }
      break;
  }
  return out;
}

inline AuditVerdict check_local(const Derivation& d, const std::vector<ChildIndex>& samples) {
  AuditVerdict v;
  ExtendedSymbol s;
  Sequent gamma;
  unsigned dg = 0;
  try {
    s = rule_of(d);
    gamma = d.end_sequent();
    dg = d.degree();
  } catch (const ProofError& e) {
    v.add("symbol", false, e.what());
    return v;
  }
  Signature sig = signature(s);

  v.add("principal", sig.principal.subset_of(gamma), render(sig.principal.minus(gamma)));
  if (s.kind == SKind::AllSetS || s.kind == SKind::OmegaTildeS)
    v.add("eigenvariable", !gamma.free_vars().set.count(s.eigen), s.eigen);
  if (s.kind == SKind::CutS)
    v.add("cut-rank", rank(s.formula) < dg, "rk " + std::to_string(rank(s.formula)) + " dg " + std::to_string(dg));

  for (const auto& i : samples) {
    std::string at = i.str();
    Derivation c;
    Sequent minors;
    try {
      c = child(d, i);
      minors = sig.minors(i);
    } catch (const ProofError& e) {
      v.add("child", false, at + ": " + e.what());
      continue;
    }
    if (!c.well_formed()) {
      v.add("child", false, at + ": " + c.malformation());
      continue;
    }
    Sequent allowed = gamma.unite(minors);
    v.add("containment", c.end_sequent().subset_of(allowed), at + ": " + render(c.end_sequent().minus(allowed)));
    v.add("degree", c.degree() <= dg,
          at + ": " + std::to_string(c.degree()) + " > " + std::to_string(dg));
    ProperReport pr = is_proper(c);
    v.add("proper", pr.ok, at + ": " + pr.path + " " + pr.reason);
  }
  return v;
}

inline AuditVerdict check_local(const Derivation& d) { return check_local(d, sample_indices(d)); }

// The index red uses at a Rep or OmegaTilde node.
inline std::optional<ChildIndex> descent_index(const Derivation& d) {
  const ExtendedSymbol& s = rule_of(d);
  if (s.kind == SKind::RepS) return ChildIndex::at(0);
  if (s.kind == SKind::OmegaTildeS)
    if (auto q = canonical_index(d)) return ChildIndex::omega(*q);
  return std::nullopt;
}

inline bool same_end(const Sequent& before, const Sequent& after, bool exact) {
  return exact ? after == before : after.subset_of(before);
}

inline AuditVerdict check_step(const Derivation& before, const Derivation& after, bool exact = false) {
  AuditVerdict v;
  try {
    GateReport g = gate(before);
    v.add("gate", g.all());
  } catch (const ProofError& e) {
    v.add("gate", false, e.what());
    return v;
  }
  if (!after.well_formed()) {
    v.add("well-formed", false, after.malformation());
    return v;
  }
  const Sequent& gb = before.end_sequent();
  const Sequent& ga = after.end_sequent();
  v.add("end-sequent", same_end(gb, ga, exact), render(gb) + " -> " + render(ga));
  v.add("degree-zero", after.degree() == 0, std::to_string(after.degree()));
  ProperReport pr = is_proper(after);
  v.add("proper", pr.ok, pr.path + " " + pr.reason);
  SKind k = rule_of(before).kind;
  if (k == SKind::RepS || k == SKind::OmegaTildeS) {
    auto i = descent_index(before);
    bool ok = false;
    std::string where = "no canonical index";
    if (i) {
      try {
        ok = identical(after, child(before, *i));
        where = i->str();
      } catch (const ProofError& e) {
        where = e.what();
      }
    }
    v.add("descent", ok, where);
  }
  return v;
}

inline AuditVerdict audit_trace(const Trace& t, const AuditOptions& opt = {}) {
  AuditVerdict v;
  Sequent expected;
  try {
    expected = t.input.end_sequent();
  } catch (const ProofError& e) {
    v.add("input", false, e.what());
    return v;
  }
  for (const auto& st : t.steps) {
    std::string at = "step " + std::to_string(st.index) + (st.path.empty() ? "" : " at " + st.path);
    AuditVerdict sv = check_step(st.before, st.after, opt.exact);
    try {
      sv.merge(check_local(st.before, sample_indices(st.before, opt)));
    } catch (const ProofError& e) {
      sv.add("local", false, e.what());
    }
    try {
      const Sequent& g = st.global.end_sequent();
      sv.add("global-end-sequent", same_end(expected, g, opt.exact), render(g));
      sv.add("global-degree", st.global.degree() == 0, std::to_string(st.global.degree()));
    } catch (const ProofError& e) {
      sv.add("global", false, e.what());
    }
    for (const auto& c : sv.checks) v.add(c.name, c.pass, c.pass ? "" : at + ": " + c.where);
  }
  v.add("budget", !t.budget_exhausted, t.budget_exhausted ? "step budget exhausted" : "");
  return v;
}

}  // namespace bi
