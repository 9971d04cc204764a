#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "bi/derivation.hpp"

namespace bi {

inline const Sequent& end_sequent(const Derivation& d) { return d.end_sequent(); }
inline unsigned degree(const Derivation& d) { return d.degree(); }

// Calls fn(d, path) on every reachable subderivation, including those held
// by premise families; fn returns false to stop descending. Shared nodes are
// visited once. Path segments: "0"/"1" for stored premises, "t" for a
// template schema, "s" for a selector parent, "m" for a map-red layer.
template <class Fn>
void for_each_node(const Derivation& root, const Fn& fn) {
  std::unordered_set<const void*> seen;
  std::function<void(const Derivation&, const std::string&)> go;
  std::function<void(const PremiseFamily&, const std::string&)> fam;
  fam = [&](const PremiseFamily& f, const std::string& path) {
    switch (f.kind()) {
      case FamKind::Template: go(f.schema(), join_path(path, "t")); break;
      case FamKind::Selector: go(f.parent(), join_path(path, "s")); break;
      case FamKind::MapRed: fam(f.inner(), join_path(path, "m")); break;
    }
  };
  go = [&](const Derivation& d, const std::string& path) {
    if (!seen.insert(d.get()).second) return;
    if (!fn(d, path)) return;
    if (d.d0().valid()) go(d.d0(), join_path(path, "0"));
    if (d.d1().valid()) go(d.d1(), join_path(path, "1"));
    if (d.family().valid()) fam(d.family(), path);
  };
  go(root, "");
}

inline std::size_t node_count(const Derivation& d) {
  std::size_t n = 0;
  for_each_node(d, [&](const Derivation&, const std::string&) {
    ++n;
    return true;
  });
  return n;
}

inline bool contains_kind(const Derivation& d, std::initializer_list<DKind> kinds) {
  bool hit = false;
  for_each_node(d, [&](const Derivation& n, const std::string&) {
    for (DKind k : kinds)
      if (n.kind() == k) hit = true;
    return !hit;
  });
  return hit;
}

inline bool has_lazy_family(const Derivation& d) {
  bool hit = false;
  for_each_node(d, [&](const Derivation& n, const std::string&) {
    if (n.family().valid() && n.family().kind() != FamKind::Template) hit = true;
    return !hit;
  });
  return hit;
}

// No R, E, Ew, Col, Sub and no lazy families.
inline bool is_bi_minus(const Derivation& d) {
  return !contains_kind(d, {DKind::R, DKind::E, DKind::Ew, DKind::Col, DKind::Sub}) && !has_lazy_family(d);
}

// ---------------------------------------------------------------------------
// Properness

struct ProperReport {
  bool ok = true;
  int clause = 0;  // 1: collapsing premise, 2: substitution premise
  std::string path;
  std::string reason;
};

inline ProperReport is_proper(const Derivation& d) {
  ProperReport rep;
  for_each_node(d, [&](const Derivation& n, const std::string& path) {
    if (!rep.ok) return false;
    if (n.kind() == DKind::Col) {
      const Derivation& h0 = n.d0();
      if (h0.degree() != 0)
        rep = {false, 1, path, "col premise has degree " + std::to_string(h0.degree())};
      else if (!h0.end_sequent().is_pi1())
        rep = {false, 1, path, "col premise end-sequent is not pi1"};
    } else if (n.kind() == DKind::Sub && n.d0().kind() != DKind::Col) {
      rep = {false, 2, path, "sub premise is not a col node"};
    }
    return rep.ok;
  });
  return rep;
}

inline void require_proper(const Derivation& d) {
  ProperReport rep = is_proper(d);
  if (!rep.ok)
    throw ProofError(ErrorKind::Improper, rep.reason, rep.path, "clause " + std::to_string(rep.clause));
}

// ---------------------------------------------------------------------------
// Variables of derivations

namespace detail {

inline std::string fresh_name(const std::string& base, const std::function<bool(const std::string&)>& used) {
  for (unsigned i = 0;; ++i) {
    std::string c = base + std::to_string(i);
    if (!used(c)) return c;
  }
}

}  // namespace detail

// Every variable name mentioned anywhere in d, free or as a binder.
inline FreeVars all_names(const Derivation& d) {
  FreeVars out;
  for_each_node(d, [&](const Derivation& n, const std::string&) {
    for (const auto& f : n.delta()) collect_free_vars(f, out);
    if (n.formula().valid()) collect_free_vars(n.formula(), out);
    if (n.abs().body.valid()) collect_free_vars(n.abs().body, out);
    if (n.witness().is_var()) out.num.insert(n.witness().name);
    if (n.kind() == DKind::AllSetI || n.kind() == DKind::Sub) out.set.insert(n.var());
    if (n.family().valid() && n.family().kind() == FamKind::Template) out.num.insert(n.family().param());
    return true;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Substitution of number variables

namespace detail {

using Memo = std::unordered_map<const void*, Derivation>;

inline Derivation subst_num_impl(const Derivation& d, const std::string& x, const NumTerm& t, Memo& memo);

inline PremiseFamily subst_num_family(const PremiseFamily& f, const std::string& x, const NumTerm& t, Memo& memo) {
  switch (f.kind()) {
    case FamKind::Template: {
      if (f.param() == x) return f;
      Memo inner;
      if (t.is_var() && t.name == f.param()) {
        FreeVars used = all_names(f.schema());
        used.num.insert(x);
        std::string fresh = fresh_name(f.param() + "_", [&](const std::string& c) { return used.num.count(c) > 0; });
        Memo ren;
        Derivation renamed = subst_num_impl(f.schema(), f.param(), NumTerm::var(fresh), ren);
        return template_family(fresh, subst_num_impl(renamed, x, t, inner));
      }
      return template_family(f.param(), subst_num_impl(f.schema(), x, t, inner));
    }
    case FamKind::Selector: return selector(subst_num_impl(f.parent(), x, t, memo));
    case FamKind::MapRed: return map_red(subst_num_family(f.inner(), x, t, memo));
  }
  return f;
}

inline Derivation subst_num_impl(const Derivation& d, const std::string& x, const NumTerm& t, Memo& memo) {
  auto it = memo.find(d.get());
  if (it != memo.end()) return it->second;
  auto F = [&](const Formula& f) { return subst_num(f, x, t); };
  auto A = [&](const Abstraction& a) { return Abstraction{a.binder, F(a.body)}; };
  auto D = [&](const Derivation& c) { return subst_num_impl(c, x, t, memo); };
  Derivation out;
  switch (d.kind()) {
    case DKind::Ax: out = ax(d.delta().map(F)); break;
    case DKind::AndI: out = and_i(F(d.formula()), D(d.d0()), D(d.d1())); break;
    case DKind::OrI: out = or_i(d.k(), F(d.formula()), D(d.d0())); break;
    case DKind::OmI: out = om_i(F(d.formula()), subst_num_family(d.family(), x, t, memo)); break;
    case DKind::ExI: {
      const NumTerm& w = d.witness();
      out = ex_i(w.is_var() && w.name == x ? t.plus(w.succ) : w, F(d.formula()), D(d.d0()));
      break;
    }
    case DKind::AllSetI: out = all_set_i(d.var(), F(d.formula()), D(d.d0())); break;
    case DKind::OrSetI: out = or_set_i(A(d.abs()), F(d.formula()), D(d.d0())); break;
    case DKind::Cut: out = cut(F(d.formula()), D(d.d0()), D(d.d1())); break;
    case DKind::R: out = r(F(d.formula()), D(d.d0()), D(d.d1())); break;
    case DKind::E:
    case DKind::Ew:
    case DKind::Col: out = unary(d.kind(), D(d.d0())); break;
    case DKind::Sub: out = sub(d.var(), A(d.abs()), D(d.d0())); break;
  }
  memo.emplace(d.get(), out);
  return out;
}

}  // namespace detail

inline Derivation subst_num(const Derivation& d, const std::string& x, const NumTerm& t) {
  detail::Memo memo;
  return detail::subst_num_impl(d, x, t, memo);
}

// The n-th premise of a template family; lazy families are resolved in
// notation.hpp.
inline Derivation instantiate_template(const PremiseFamily& f, const NumTerm& n) {
  return subst_num(f.schema(), f.param(), n);
}

// ---------------------------------------------------------------------------
// Renaming of free set variables. ALLI and sub bind their variable in the
// premise, so renaming stops there.

namespace detail {

inline Derivation rename_set_impl(const Derivation& d, const std::string& x, const std::string& y, Memo& memo);

inline PremiseFamily rename_set_family(const PremiseFamily& f, const std::string& x, const std::string& y, Memo& memo) {
  switch (f.kind()) {
    case FamKind::Template: return template_family(f.param(), rename_set_impl(f.schema(), x, y, memo));
    case FamKind::Selector: return selector(rename_set_impl(f.parent(), x, y, memo));
    case FamKind::MapRed: return map_red(rename_set_family(f.inner(), x, y, memo));
  }
  return f;
}

inline Derivation rename_set_impl(const Derivation& d, const std::string& x, const std::string& y, Memo& memo) {
  auto it = memo.find(d.get());
  if (it != memo.end()) return it->second;
  auto F = [&](const Formula& f) { return rename_set(f, x, y); };
  auto A = [&](const Abstraction& a) { return Abstraction{a.binder, F(a.body)}; };
  auto D = [&](const Derivation& c) { return rename_set_impl(c, x, y, memo); };
  Derivation out;
  switch (d.kind()) {
    case DKind::Ax: out = ax(d.delta().map(F)); break;
    case DKind::AndI: out = and_i(F(d.formula()), D(d.d0()), D(d.d1())); break;
    case DKind::OrI: out = or_i(d.k(), F(d.formula()), D(d.d0())); break;
    case DKind::OmI: out = om_i(F(d.formula()), rename_set_family(d.family(), x, y, memo)); break;
    case DKind::ExI: out = ex_i(d.witness(), F(d.formula()), D(d.d0())); break;
    case DKind::AllSetI:
      out = all_set_i(d.var(), F(d.formula()), d.var() == x ? d.d0() : D(d.d0()));
      break;
    case DKind::OrSetI: out = or_set_i(A(d.abs()), F(d.formula()), D(d.d0())); break;
    case DKind::Cut: out = cut(F(d.formula()), D(d.d0()), D(d.d1())); break;
    case DKind::R: out = r(F(d.formula()), D(d.d0()), D(d.d1())); break;
    case DKind::E:
    case DKind::Ew:
    case DKind::Col: out = unary(d.kind(), D(d.d0())); break;
    case DKind::Sub: out = sub(d.var(), A(d.abs()), d.var() == x ? d.d0() : D(d.d0())); break;
  }
  memo.emplace(d.get(), out);
  return out;
}

}  // namespace detail

inline Derivation rename_set(const Derivation& d, const std::string& x, const std::string& y) {
  if (x == y) return d;
  detail::Memo memo;
  return detail::rename_set_impl(d, x, y, memo);
}

// ---------------------------------------------------------------------------
// Global eigenvariable separation

namespace detail {

struct Separator {
  std::set<std::string> used;
  unsigned counter = 0;

  std::string fresh() {
    for (;;) {
      std::string c = "Y" + std::to_string(counter++);
      if (used.insert(c).second) return c;
    }
  }

  PremiseFamily family(const PremiseFamily& f) {
    switch (f.kind()) {
      case FamKind::Template: return template_family(f.param(), (*this)(f.schema()));
      case FamKind::Selector: return selector((*this)(f.parent()));
      case FamKind::MapRed: return map_red(family(f.inner()));
    }
    return f;
  }

  // Walks d as a tree so that shared subterms receive distinct names.
  Derivation operator()(const Derivation& d) {
    switch (d.kind()) {
      case DKind::Ax: return d;
      case DKind::AndI: return and_i(d.formula(), (*this)(d.d0()), (*this)(d.d1()));
      case DKind::OrI: return or_i(d.k(), d.formula(), (*this)(d.d0()));
      case DKind::OmI: return om_i(d.formula(), family(d.family()));
      case DKind::ExI: return ex_i(d.witness(), d.formula(), (*this)(d.d0()));
      case DKind::AllSetI: {
        std::string y = fresh();
        return all_set_i(y, d.formula(), (*this)(rename_set(d.d0(), d.var(), y)));
      }
      case DKind::OrSetI: return or_set_i(d.abs(), d.formula(), (*this)(d.d0()));
      case DKind::Cut: return cut(d.formula(), (*this)(d.d0()), (*this)(d.d1()));
      case DKind::R: return r(d.formula(), (*this)(d.d0()), (*this)(d.d1()));
      case DKind::E:
      case DKind::Ew:
      case DKind::Col: return unary(d.kind(), (*this)(d.d0()));
      case DKind::Sub: return sub(d.var(), d.abs(), (*this)(d.d0()));
    }
    return d;
  }
};

}  // namespace detail

inline Derivation rename_separated(const Derivation& d) {
  detail::Separator s;
  s.used = all_names(d).set;
  return s(d);
}

// ---------------------------------------------------------------------------
// Validation

namespace detail {

struct Validator {
  struct Ctx {
    std::set<std::string> binders;  // eigenvariables and sub variables above
    std::set<std::string> below;    // free set variables of sequents at or below
  };

  std::set<std::tuple<const void*, std::set<std::string>, std::set<std::string>>> done;

  [[noreturn]] static void fail(ErrorKind k, const std::string& msg, const std::string& path,
                                const std::string& clause = {}) {
    throw ProofError(k, msg, path, clause);
  }

  static void check_axiom(const Derivation& d, const std::string& path) {
    const Sequent& s = d.delta();
    if (s.size() == 1) {
      const Formula& a = *s.begin();
      if (!a.is_literal()) fail(ErrorKind::IllFormed, "single-formula axiom must be a literal", path);
      if (!literal_valid(a)) fail(ErrorKind::AxiomNotTrue, "axiom literal is not true: " + a.key(), path);
      return;
    }
    if (s.size() == 2) {
      const Formula& a = s.formulas()[0];
      const Formula& b = s.formulas()[1];
      if (negate(a) == b) return;
      fail(ErrorKind::IllFormed, "two-formula axiom must be {C, not C}", path);
    }
    fail(ErrorKind::IllFormed, "axiom must be a true literal or {C, not C}", path);
  }

  void family(const PremiseFamily& f, const Ctx& ctx, const std::string& path) {
    switch (f.kind()) {
      case FamKind::Template: node(f.schema(), ctx, join_path(path, "t")); break;
      case FamKind::Selector: node(f.parent(), ctx, join_path(path, "s")); break;
      case FamKind::MapRed: family(f.inner(), ctx, join_path(path, "m")); break;
    }
  }

  void node(const Derivation& d, Ctx ctx, const std::string& path) {
    if (!d.well_formed()) {
      // Report the innermost malformed node.
      for (auto [c, seg] : {std::pair{&d.d0(), "0"}, std::pair{&d.d1(), "1"}})
        if (c->valid() && !c->well_formed()) node(*c, ctx, join_path(path, seg));
      fail(ErrorKind::IllFormed, d.malformation(), path);
    }
    for (const auto& x : d.end_sequent().free_vars().set) ctx.below.insert(x);
    if (!done.emplace(d.get(), ctx.binders, ctx.below).second) return;

    switch (d.kind()) {
      case DKind::Ax: check_axiom(d, path); return;
      case DKind::AllSetI:
        if (ctx.binders.count(d.var()))
          fail(ErrorKind::EigenvariableClash, "eigenvariable " + d.var() + " already bound on this path", path);
        if (ctx.below.count(d.var()))
          fail(ErrorKind::EigenvariableEscapes, "eigenvariable " + d.var() + " occurs free at or below its inference", path);
        ctx.binders.insert(d.var());
        break;
      case DKind::Sub:
        ctx.binders.insert(d.var());
        break;
      default: break;
    }
    if (d.kind() == DKind::Sub || d.kind() == DKind::AllSetI) {
      // Below-sets restart inside a binder for its own variable.
      ctx.below.erase(d.var());
    }
    if (d.d0().valid()) node(d.d0(), ctx, join_path(path, "0"));
    if (d.d1().valid()) node(d.d1(), ctx, join_path(path, "1"));
    if (d.family().valid()) family(d.family(), ctx, path);
  }
};

}  // namespace detail

inline void validate(const Derivation& d) {
  detail::Validator v;
  v.node(d, {}, "");
}

inline std::optional<ProofError> check_valid(const Derivation& d) {
  try {
    validate(d);
  } catch (const ProofError& e) {
    return e;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Equality of derivations

namespace detail {

struct AlphaEq {
  bool strict = false;
  // Binder renamings into shared canonical names, per side.
  std::map<std::string, std::string> set_a, set_b, num_a, num_b;
  unsigned fresh = 0;
  std::set<std::pair<const void*, const void*>> memo;  // used while maps are empty

  static Formula rename_all(Formula f, const std::map<std::string, std::string>& sets,
                            const std::map<std::string, std::string>& nums) {
    if (sets.empty() && nums.empty()) return f;
    FreeVars fv = free_vars(f);
    for (const auto& x : fv.set)
      if (auto it = sets.find(x); it != sets.end()) f = bi::rename_set(f, x, it->second);
    for (const auto& x : fv.num)
      if (auto it = nums.find(x); it != nums.end()) f = rename_num(f, x, it->second);
    return f;
  }

  bool formula(const Formula& a, const Formula& b) const {
    return rename_all(a, set_a, num_a) == rename_all(b, set_b, num_b);
  }

  bool term(const NumTerm& a, const NumTerm& b) const {
    auto ren = [](NumTerm t, const std::map<std::string, std::string>& m) {
      if (t.is_var())
        if (auto it = m.find(t.name); it != m.end()) t.name = it->second;
      return t;
    };
    return ren(a, num_a) == ren(b, num_b);
  }

  bool set_name(const std::string& a, const std::string& b) const {
    auto ren = [](const std::string& x, const std::map<std::string, std::string>& m) {
      auto it = m.find(x);
      return it == m.end() ? x : it->second;
    };
    return ren(a, set_a) == ren(b, set_b);
  }

  template <class Body>
  bool bind(std::map<std::string, std::string>& ma, std::map<std::string, std::string>& mb,
            const std::string& xa, const std::string& xb, const Body& body) {
    if (strict) return xa == xb && body();
    std::string canon = "%" + std::to_string(fresh++);
    auto saved_a = ma, saved_b = mb;
    ma[xa] = canon;
    mb[xb] = canon;
    bool ok = body();
    ma = std::move(saved_a);
    mb = std::move(saved_b);
    return ok;
  }

  bool family(const PremiseFamily& a, const PremiseFamily& b) {
    if (a.get() == b.get() && set_a.empty() && num_a.empty() && set_b.empty() && num_b.empty()) return true;
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
      case FamKind::Template:
        return bind(num_a, num_b, a.param(), b.param(), [&] { return (*this)(a.schema(), b.schema()); });
      case FamKind::Selector: return (*this)(a.parent(), b.parent());
      case FamKind::MapRed: return family(a.inner(), b.inner());
    }
    return false;
  }

  bool operator()(const Derivation& a, const Derivation& b) {
    bool plain = set_a.empty() && num_a.empty() && set_b.empty() && num_b.empty();
    if (plain) {
      if (a.get() == b.get()) return true;
      if (memo.count({a.get(), b.get()})) return true;
    }
    if (a.kind() != b.kind()) return false;
    bool ok = false;
    switch (a.kind()) {
      case DKind::Ax: {
        if (a.delta().size() != b.delta().size()) return false;
        Sequent ra = a.delta().map([&](const Formula& f) { return rename_all(f, set_a, num_a); });
        Sequent rb = b.delta().map([&](const Formula& f) { return rename_all(f, set_b, num_b); });
        ok = ra == rb;
        break;
      }
      case DKind::AndI:
      case DKind::Cut:
      case DKind::R:
        ok = formula(a.formula(), b.formula()) && (*this)(a.d0(), b.d0()) && (*this)(a.d1(), b.d1());
        break;
      case DKind::OrI:
        ok = a.k() == b.k() && formula(a.formula(), b.formula()) && (*this)(a.d0(), b.d0());
        break;
      case DKind::OmI: ok = formula(a.formula(), b.formula()) && family(a.family(), b.family()); break;
      case DKind::ExI:
        ok = term(a.witness(), b.witness()) && formula(a.formula(), b.formula()) && (*this)(a.d0(), b.d0());
        break;
      case DKind::AllSetI:
        ok = formula(a.formula(), b.formula()) &&
             bind(set_a, set_b, a.var(), b.var(), [&] { return (*this)(a.d0(), b.d0()); });
        break;
      case DKind::OrSetI:
        ok = formula(a.abs().body, b.abs().body) && formula(a.formula(), b.formula()) && (*this)(a.d0(), b.d0());
        break;
      case DKind::E:
      case DKind::Ew:
      case DKind::Col: ok = (*this)(a.d0(), b.d0()); break;
      case DKind::Sub:
        ok = formula(a.abs().body, b.abs().body) &&
             bind(set_a, set_b, a.var(), b.var(), [&] { return (*this)(a.d0(), b.d0()); });
        break;
    }
    if (ok && plain) memo.insert({a.get(), b.get()});
    return ok;
  }
};

}  // namespace detail

// Equality up to renaming of eigenvariables, sub variables and template
// parameters (formula binders are already nameless).
inline bool alpha_equal(const Derivation& a, const Derivation& b) {
  detail::AlphaEq eq;
  return eq(a, b);
}

inline bool alpha_equal(const PremiseFamily& a, const PremiseFamily& b) {
  detail::AlphaEq eq;
  return eq.family(a, b);
}

// Literal structural identity, names included.
inline bool identical(const Derivation& a, const Derivation& b) {
  detail::AlphaEq eq;
  eq.strict = true;
  return eq(a, b);
}

}  // namespace bi
