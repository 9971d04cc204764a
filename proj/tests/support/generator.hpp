#pragma once

// Random derivations for the property suites. Terms are built bottom-up with
// a node budget; callers filter for validity and properness.

#include <random>
#include <string>
#include <vector>

#include "bi/bi.hpp"

namespace bi::testing {

struct GenOptions {
  unsigned max_nodes = 12;
  std::uint64_t max_numeral = 3;
  bool logical_only = false;  // ax, andI, orI, omI, exI, ALLI
};

class Generator {
 public:
  explicit Generator(std::uint64_t seed, GenOptions opt = {}) : rng_(seed), opt_(opt) {}

  Derivation derivation() {
    params_.clear();
    fresh_ = 0;
    Derivation d = gen(opt_.max_nodes);
    if (!opt_.logical_only && d.well_formed() && chance(0.35)) d = chance(0.5) ? ew(d) : e(d);
    return d;
  }

  // Next derivation that validates, is proper and fits the node budget.
  Derivation proper_derivation(std::size_t* tries = nullptr) {
    for (;;) {
      if (tries) ++*tries;
      Derivation d;
      try {
        d = derivation();
      } catch (const ProofError&) {
        continue;
      }
      if (!d.well_formed() || node_count(d) > opt_.max_nodes) continue;
      if (check_valid(d)) continue;
      if (!is_proper(d).ok) continue;
      return d;
    }
  }

  Formula formula(unsigned depth = 2) { return gen_formula(depth, {"X", "Y"}, true); }

 private:
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }
  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

  NumTerm term() {
    if (!params_.empty() && chance(0.3)) {
      NumTerm v = NumTerm::var(params_[pick(params_.size())]);
      return chance(0.25) ? succ(v) : v;
    }
    return NumTerm::numeral(pick(opt_.max_numeral + 1));
  }

  Formula literal(const std::vector<std::string>& sets) {
    if (!sets.empty() && chance(0.3)) {
      Formula f = set_lit(sets[pick(sets.size())], term());
      return chance(0.5) ? f : negate(f);
    }
    static const char* rels[] = {"eq", "lt", "le"};
    Formula f = rel(rels[pick(3)], {term(), term()});
    return chance(0.5) ? f : negate(f);
  }

  // so: whether set quantifiers may occur.
  Formula gen_formula(unsigned depth, const std::vector<std::string>& sets, bool so = false) {
    if (depth == 0 || chance(0.4)) return literal(sets);
    switch (pick(so ? 6 : 4)) {
      case 0: return conj(gen_formula(depth - 1, sets, so), gen_formula(depth - 1, sets, so));
      case 1: return disj(gen_formula(depth - 1, sets, so), gen_formula(depth - 1, sets, so));
      case 2:
      case 3: {
        std::string x = "x" + std::to_string(depth);
        params_.push_back(x);
        Formula b = gen_formula(depth - 1, sets, so);
        params_.pop_back();
        return pick(2) ? forall_num(x, b) : exists_num(x, b);
      }
      default: {
        // Set quantifier over a first-order body in one set variable.
        Formula b = gen_formula(depth - 1, {"Z"});
        return pick(2) ? forall_set("Z", b) : exists_set("Z", b);
      }
    }
  }

  Formula some_formula_of(const Derivation& d) {
    const auto& fs = d.end_sequent().formulas();
    if (!fs.empty() && chance(0.7)) return fs[pick(fs.size())];
    return formula();
  }

  Abstraction abstraction_() {
    params_.push_back("t");
    Formula body = gen_formula(1, {});
    params_.pop_back();
    if (!free_vars(body).num.count("t")) body = eq(NumTerm::var("t"), NumTerm::numeral(pick(opt_.max_numeral + 1)));
    return abstraction("t", body);
  }

  Derivation axiom() {
    if (chance(0.5)) {
      Formula l = literal({"X", "Y"});
      if (l.kind() == FKind::Rel) {
        if (literal_valid(l)) return ax({l});
        if (literal_valid(negate(l))) return ax({negate(l)});
      }
    }
    Formula l = literal({"X", "Y"});
    return ax({l, negate(l)});
  }

  // Replaces occurrences of t in f by x, each with probability 3/4.
  Formula abstract_term(const Formula& f, const NumTerm& t, const std::string& x) {
    return detail::map_terms(f, 0, [&](const NumTerm& a, std::uint32_t) {
      return a == t && chance(0.75) ? NumTerm::var(x) : a;
    });
  }

  // Two premises sharing budget - 1 nodes.
  std::pair<Derivation, Derivation> pair(unsigned budget) {
    unsigned b0 = budget > 2 ? 1 + static_cast<unsigned>(pick(budget - 2)) : 1;
    return {gen(b0), gen(std::max(1u, budget - 1 - b0))};
  }

  Derivation gen(unsigned budget) {
    if (budget <= 1) return axiom();
    unsigned kinds = opt_.logical_only ? 6 : 13;
    switch (pick(kinds)) {
      case 0: return axiom();
      case 1: {
        auto [d0, d1] = pair(budget);
        return and_i(conj(some_formula_of(d0), some_formula_of(d1)), d0, d1);
      }
      case 2: {
        Derivation d0 = gen(budget - 1);
        unsigned k = static_cast<unsigned>(pick(2));
        Formula a = some_formula_of(d0), b = formula(1);
        return or_i(k, k == 0 ? disj(a, b) : disj(b, a), d0);
      }
      case 3: return omega(budget);
      case 4: {
        Derivation d0 = gen(budget - 1);
        Formula f = some_formula_of(d0);
        NumTerm t = term();
        std::string x = "w" + std::to_string(fresh_++);
        return ex_i(t, exists_num(x, abstract_term(f, t, x)), d0);
      }
      case 5: return all_set(budget);
      case 6: {
        Derivation d0 = gen(budget - 1);
        Abstraction t = abstraction_();
        Formula b = gen_formula(1, {"Z"});
        return or_set_i(t, exists_set("Z", b), d0);
      }
      case 7:
      case 8: return redex(budget);
      case 9: {
        auto [d0, d1] = pair(budget);
        Formula c = some_formula_of(d0);
        return pick(2) ? cut(c, d0, d1) : r(c, d0, d1);
      }
      case 10: return pick(2) ? e(gen(budget - 1)) : ew(gen(budget - 1));
      case 11: return collapse(budget);
      default: {
        Derivation c = collapse(budget - 1);
        if (c.kind() != DKind::Col) return c;
        FreeVars fv = c.end_sequent().free_vars();
        std::string x = fv.set.empty() || chance(0.2) ? "X" : *fv.set.begin();
        return sub(x, abstraction_(), c);
      }
    }
  }

  // omI with a template schema over a fresh parameter.
  Derivation omega(unsigned budget) {
    std::string v = "v" + std::to_string(fresh_++);
    params_.push_back(v);
    Derivation schema = gen(budget - 1);
    params_.pop_back();
    if (!schema.well_formed()) return schema;
    std::vector<Formula> with_v;
    for (const auto& f : schema.end_sequent())
      if (free_vars(f).num.count(v)) with_v.push_back(f);
    Formula body;
    if (with_v.size() == 1) {
      body = with_v[0];
    } else if (with_v.empty()) {
      params_.push_back(v);
      body = gen_formula(1, {"X", "Y"});
      params_.pop_back();
    } else {
      // More than one formula mentions v: fix v in the schema instead.
      schema = subst_num(schema, v, NumTerm::numeral(pick(opt_.max_numeral + 1)));
      body = some_formula_of(schema);
    }
    return om_i(forall_num(v, body), template_family(v, schema));
  }

  Derivation all_set(unsigned budget) {
    Derivation d0 = gen(budget - 1);
    if (!d0.well_formed()) return d0;
    std::vector<std::string> names = {"X", "Y", "Z"};
    std::string y = names[pick(names.size())];
    std::vector<Formula> with_y;
    for (const auto& f : d0.end_sequent())
      if (free_vars(f).set.count(y)) with_y.push_back(f);
    Formula body;
    if (with_y.size() == 1 && is_arithmetical(with_y[0]) && free_vars(with_y[0]).set.size() == 1)
      body = with_y[0];
    else if (with_y.empty())
      body = gen_formula(1, {y});
    else
      body = literal({y});
    return all_set_i(y, forall_set(y, body), d0);
  }

  // Derivation whose last rule introduces f.
  Derivation intro(const Formula& f, unsigned budget) {
    auto premise = [&](const Formula& g) { return budget > 2 && chance(0.5) ? intro(g, budget / 2) : gen(budget / 2); };
    switch (f.kind()) {
      case FKind::Rel:
        if (literal_valid(f)) return ax({f});
        return ax({f, negate(f)});
      case FKind::Set: return ax({f, negate(f)});
      case FKind::And: return and_i(f, premise(f.left()), premise(f.right()));
      case FKind::Or: {
        unsigned k = static_cast<unsigned>(pick(2));
        return or_i(k, f, premise(k == 0 ? f.left() : f.right()));
      }
      case FKind::AllNum: {
        std::string v = "v" + std::to_string(fresh_++);
        Formula inst = instantiate(f, NumTerm::var(v));
        Derivation s = inst.is_literal() && literal_valid(inst) ? ax({inst}) : premise(inst);
        return om_i(f, template_family(v, s));
      }
      case FKind::ExNum: {
        NumTerm t = NumTerm::numeral(pick(opt_.max_numeral + 1));
        return ex_i(t, f, premise(instantiate(f, t)));
      }
      case FKind::AllSet: {
        std::string y = "Y" + std::to_string(fresh_++);
        return all_set_i(y, f, premise(instantiate(f, y)));
      }
      case FKind::ExSet: {
        Abstraction t = abstraction_();
        return or_set_i(t, f, premise(instantiate(f, t)));
      }
    }
    return axiom();
  }

  // r over introductions of C and ~C, wrapped so that the degree drops.
  Derivation redex(unsigned budget) {
    Formula c = formula(2);
    unsigned half = std::max(1u, (budget - 1) / 2);
    Derivation d = r(c, intro(c, half), intro(negate(c), half));
    if (!d.well_formed()) return d;
    switch (pick(3)) {
      case 0: return e(d);
      case 1: return ew(d);
      default: return d;
    }
  }

  Derivation collapse(unsigned budget) {
    Derivation h = gen(budget - 1);
    if (!h.well_formed()) return h;
    if (h.degree() != 0) h = ew(h);
    if (!h.end_sequent().is_pi1()) return h;
    return col(h);
  }

  std::mt19937_64 rng_;
  GenOptions opt_;
  std::vector<std::string> params_;
  unsigned fresh_ = 0;
};

}  // namespace bi::testing
