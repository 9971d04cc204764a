#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include "bi/error.hpp"

namespace bi {

// Number terms are S^succ applied to a base: 0, a free variable, or a
// de Bruijn index bound by an enclosing number quantifier or abstraction.
struct NumTerm {
  enum class Base : std::uint8_t { Zero, Free, Bound };

  Base base = Base::Zero;
  std::string name;
  std::uint32_t index = 0;
  std::uint64_t succ = 0;

  static NumTerm numeral(std::uint64_t n) {
    NumTerm t;
    t.succ = n;
    return t;
  }
  static NumTerm zero() { return numeral(0); }
  static NumTerm var(std::string name, std::uint64_t succ = 0) {
    NumTerm t;
    t.base = Base::Free;
    t.name = std::move(name);
    t.succ = succ;
    return t;
  }
  static NumTerm bound(std::uint32_t i, std::uint64_t succ = 0) {
    NumTerm t;
    t.base = Base::Bound;
    t.index = i;
    t.succ = succ;
    return t;
  }

  NumTerm plus(std::uint64_t k) const {
    NumTerm t = *this;
    t.succ += k;
    return t;
  }

  bool closed() const { return base == Base::Zero; }
  bool is_var() const { return base == Base::Free; }
  std::uint64_t value() const { return succ; }

  std::string key() const {
    switch (base) {
      case Base::Zero: return std::to_string(succ);
      case Base::Free: return succ ? name + "+" + std::to_string(succ) : name;
      case Base::Bound:
        return "#" + std::to_string(index) + (succ ? "+" + std::to_string(succ) : "");
    }
    return {};
  }

  friend bool operator==(const NumTerm& a, const NumTerm& b) {
    return a.base == b.base && a.succ == b.succ && a.index == b.index && a.name == b.name;
  }
  friend bool operator!=(const NumTerm& a, const NumTerm& b) { return !(a == b); }
};

inline NumTerm succ(const NumTerm& t) { return t.plus(1); }

// ---------------------------------------------------------------------------
// Relation table

struct RelationInfo {
  std::string name;
  std::size_t arity = 0;
  std::function<bool(const std::vector<std::uint64_t>&)> decide;
  bool builtin = false;
};

class RelationTable {
 public:
  static RelationTable& instance() {
    static RelationTable table;
    return table;
  }

  // Registers a primitive recursive relation given by a total decision
  // procedure. Re-registering a name replaces it unless it is builtin.
  void add(std::string name, std::size_t arity,
           std::function<bool(const std::vector<std::uint64_t>&)> decide) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = rels_.find(name);
    if (it != rels_.end() && it->second.builtin)
      throw ProofError(ErrorKind::IllFormed, "cannot redefine builtin relation " + name);
    rels_[name] = RelationInfo{name, arity, std::move(decide), false};
  }

  const RelationInfo* find(const std::string& name) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = rels_.find(name);
    return it == rels_.end() ? nullptr : &it->second;
  }

 private:
  RelationTable() {
    auto add_builtin = [&](const char* n, auto fn) {
      rels_[n] = RelationInfo{n, 2, fn, true};
    };
    add_builtin("eq", [](const std::vector<std::uint64_t>& v) { return v[0] == v[1]; });
    add_builtin("lt", [](const std::vector<std::uint64_t>& v) { return v[0] < v[1]; });
    add_builtin("le", [](const std::vector<std::uint64_t>& v) { return v[0] <= v[1]; });
  }

  mutable std::mutex mu_;
  std::map<std::string, RelationInfo> rels_;
};

inline void register_relation(std::string name, std::size_t arity,
                              std::function<bool(const std::vector<std::uint64_t>&)> decide) {
  RelationTable::instance().add(std::move(name), arity, std::move(decide));
}

// ---------------------------------------------------------------------------
// Formulas

enum class FKind : std::uint8_t { Rel, Set, And, Or, AllNum, ExNum, AllSet, ExSet };

enum class FormulaClass : std::uint8_t { Literal, Arithmetical, Pi1, General };

struct SetVarRef {
  bool bound = false;
  std::string name;
  std::uint32_t index = 0;

  std::string key() const { return bound ? "$" + std::to_string(index) : name; }
  friend bool operator==(const SetVarRef& a, const SetVarRef& b) {
    return a.bound == b.bound && a.index == b.index && a.name == b.name;
  }
};

class Formula;

namespace detail {
struct FormulaNode;
}

class Formula {
 public:
  Formula() = default;
  explicit Formula(std::shared_ptr<const detail::FormulaNode> n) : node_(std::move(n)) {}

  bool valid() const { return node_ != nullptr; }
  const detail::FormulaNode& node() const { return *node_; }
  const detail::FormulaNode* get() const { return node_.get(); }

  FKind kind() const;
  bool positive() const;
  const std::string& relation() const;
  const std::vector<NumTerm>& args() const;
  const SetVarRef& set_var() const;
  const NumTerm& set_arg() const;
  const Formula& left() const;
  const Formula& right() const;
  const Formula& body() const;
  const std::string& hint() const;

  const std::string& key() const;
  std::size_t hash() const;
  unsigned rank() const;
  bool has_exists_set() const;
  bool has_second_order() const;

  bool is_literal() const { return kind() == FKind::Rel || kind() == FKind::Set; }
  bool is_binary() const { return kind() == FKind::And || kind() == FKind::Or; }
  bool is_quantifier() const { return kind() >= FKind::AllNum; }

  friend bool operator==(const Formula& a, const Formula& b) {
    return a.node_ == b.node_ || a.key() == b.key();
  }
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }
  friend bool operator<(const Formula& a, const Formula& b) { return a.key() < b.key(); }

 private:
  std::shared_ptr<const detail::FormulaNode> node_;
};

namespace detail {

struct FormulaNode {
  FKind kind = FKind::Rel;
  bool positive = true;
  std::string rel;
  std::vector<NumTerm> args;  // Rel arguments, or the single Set argument
  SetVarRef var;
  Formula l, r;  // quantifiers keep their body in l
  std::string hint;

  std::string key;
  std::size_t hash = 0;
  unsigned rank = 0;
  bool has_exists_set = false;
  bool has_second_order = false;
};

inline std::string join_keys(const std::vector<NumTerm>& ts) {
  std::string s;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (i) s += ",";
    s += ts[i].key();
  }
  return s;
}

inline Formula finish(std::shared_ptr<FormulaNode> n) {
  switch (n->kind) {
    case FKind::Rel:
      n->key = std::string(n->positive ? "" : "~") + n->rel + "(" + join_keys(n->args) + ")";
      break;
    case FKind::Set:
      n->key = std::string(n->positive ? "" : "~") + "@" + n->var.key() + "(" +
               n->args[0].key() + ")";
      break;
    case FKind::And:
    case FKind::Or:
      n->key = std::string(n->kind == FKind::And ? "&(" : "|(") + n->l.key() + "," +
               n->r.key() + ")";
      n->rank = std::max(n->l.rank(), n->r.rank()) + 1;
      n->has_exists_set = n->l.has_exists_set() || n->r.has_exists_set();
      n->has_second_order = n->l.has_second_order() || n->r.has_second_order();
      break;
    case FKind::AllNum:
    case FKind::ExNum:
      n->key = std::string(n->kind == FKind::AllNum ? "A." : "E.") + n->l.key();
      n->rank = n->l.rank() + 1;
      n->has_exists_set = n->l.has_exists_set();
      n->has_second_order = n->l.has_second_order();
      break;
    case FKind::AllSet:
    case FKind::ExSet:
      n->key = std::string(n->kind == FKind::AllSet ? "AS." : "ES.") + n->l.key();
      n->rank = 0;
      n->has_exists_set = n->kind == FKind::ExSet;
      n->has_second_order = true;
      break;
  }
  n->hash = std::hash<std::string>{}(n->key);
  return Formula(std::move(n));
}

inline Formula make_rel(std::string rel, std::vector<NumTerm> args, bool positive) {
  auto n = std::make_shared<FormulaNode>();
  n->kind = FKind::Rel;
  n->rel = std::move(rel);
  n->args = std::move(args);
  n->positive = positive;
  return finish(std::move(n));
}

inline Formula make_set(SetVarRef v, NumTerm arg, bool positive) {
  auto n = std::make_shared<FormulaNode>();
  n->kind = FKind::Set;
  n->var = std::move(v);
  n->args = {std::move(arg)};
  n->positive = positive;
  return finish(std::move(n));
}

inline Formula make_bin(FKind k, Formula a, Formula b) {
  auto n = std::make_shared<FormulaNode>();
  n->kind = k;
  n->l = std::move(a);
  n->r = std::move(b);
  return finish(std::move(n));
}

inline Formula make_quant(FKind k, std::string hint, Formula body) {
  auto n = std::make_shared<FormulaNode>();
  n->kind = k;
  n->hint = std::move(hint);
  n->l = std::move(body);
  return finish(std::move(n));
}

}  // namespace detail

inline FKind Formula::kind() const { return node_->kind; }
inline bool Formula::positive() const { return node_->positive; }
inline const std::string& Formula::relation() const { return node_->rel; }
inline const std::vector<NumTerm>& Formula::args() const { return node_->args; }
inline const SetVarRef& Formula::set_var() const { return node_->var; }
inline const NumTerm& Formula::set_arg() const { return node_->args[0]; }
inline const Formula& Formula::left() const { return node_->l; }
inline const Formula& Formula::right() const { return node_->r; }
inline const Formula& Formula::body() const { return node_->l; }
inline const std::string& Formula::hint() const { return node_->hint; }
inline const std::string& Formula::key() const { return node_->key; }
inline std::size_t Formula::hash() const { return node_->hash; }
inline unsigned Formula::rank() const { return node_->rank; }
inline bool Formula::has_exists_set() const { return node_->has_exists_set; }
inline bool Formula::has_second_order() const { return node_->has_second_order; }

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

// ---------------------------------------------------------------------------
// Term-level helpers used by the binder operations below.

namespace detail {

// Shifts bound indices >= cutoff by `by`.
inline NumTerm shift_term(const NumTerm& t, std::uint32_t cutoff, std::uint32_t by) {
  if (t.base == NumTerm::Base::Bound && t.index >= cutoff) return NumTerm::bound(t.index + by, t.succ);
  return t;
}

template <class TermFn>
Formula map_terms(const Formula& f, std::uint32_t depth, const TermFn& fn) {
  switch (f.kind()) {
    case FKind::Rel: {
      std::vector<NumTerm> args;
      args.reserve(f.args().size());
      bool changed = false;
      for (const auto& a : f.args()) {
        args.push_back(fn(a, depth));
        changed = changed || args.back() != a;
      }
      return changed ? make_rel(f.relation(), std::move(args), f.positive()) : f;
    }
    case FKind::Set: {
      NumTerm a = fn(f.set_arg(), depth);
      return a != f.set_arg() ? make_set(f.set_var(), std::move(a), f.positive()) : f;
    }
    case FKind::And:
    case FKind::Or: {
      Formula l = map_terms(f.left(), depth, fn);
      Formula r = map_terms(f.right(), depth, fn);
      if (l.get() == f.left().get() && r.get() == f.right().get()) return f;
      return make_bin(f.kind(), std::move(l), std::move(r));
    }
    case FKind::AllNum:
    case FKind::ExNum: {
      Formula b = map_terms(f.body(), depth + 1, fn);
      return b.get() == f.body().get() ? f : make_quant(f.kind(), f.hint(), std::move(b));
    }
    case FKind::AllSet:
    case FKind::ExSet: {
      Formula b = map_terms(f.body(), depth, fn);
      return b.get() == f.body().get() ? f : make_quant(f.kind(), f.hint(), std::move(b));
    }
  }
  return f;
}

// Rewrites set literals; fn(literal, number depth, set depth) returns a
// replacement or an invalid Formula to keep the literal.
template <class LitFn>
Formula map_setlits(const Formula& f, std::uint32_t ndepth, std::uint32_t sdepth, const LitFn& fn) {
  switch (f.kind()) {
    case FKind::Rel: return f;
    case FKind::Set: {
      Formula g = fn(f, ndepth, sdepth);
      return g.valid() ? g : f;
    }
    case FKind::And:
    case FKind::Or: {
      Formula l = map_setlits(f.left(), ndepth, sdepth, fn);
      Formula r = map_setlits(f.right(), ndepth, sdepth, fn);
      if (l.get() == f.left().get() && r.get() == f.right().get()) return f;
      return make_bin(f.kind(), std::move(l), std::move(r));
    }
    case FKind::AllNum:
    case FKind::ExNum: {
      Formula b = map_setlits(f.body(), ndepth + 1, sdepth, fn);
      return b.get() == f.body().get() ? f : make_quant(f.kind(), f.hint(), std::move(b));
    }
    case FKind::AllSet:
    case FKind::ExSet: {
      Formula b = map_setlits(f.body(), ndepth, sdepth + 1, fn);
      return b.get() == f.body().get() ? f : make_quant(f.kind(), f.hint(), std::move(b));
    }
  }
  return f;
}

// Replaces bound index `depth` (relative to the binder being opened) by t.
inline Formula open_num(const Formula& f, const NumTerm& t) {
  return map_terms(f, 0, [&](const NumTerm& a, std::uint32_t d) {
    if (a.base != NumTerm::Base::Bound) return a;
    if (a.index == d) return shift_term(t, 0, d).plus(a.succ);
    if (a.index > d) return NumTerm::bound(a.index - 1, a.succ);
    return a;
  });
}

// Turns free variable x into the index of a new binder placed around f.
inline Formula close_num(const Formula& f, const std::string& x) {
  return map_terms(f, 0, [&](const NumTerm& a, std::uint32_t d) {
    if (a.base == NumTerm::Base::Free && a.name == x) return NumTerm::bound(d, a.succ);
    if (a.base == NumTerm::Base::Bound && a.index >= d) return NumTerm::bound(a.index + 1, a.succ);
    return a;
  });
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Public constructors

inline Formula rel(const std::string& name, std::vector<NumTerm> args, bool positive = true) {
  const RelationInfo* info = RelationTable::instance().find(name);
  if (!info) throw ProofError(ErrorKind::IllFormed, "unknown relation symbol " + name);
  if (info->arity != args.size())
    throw ProofError(ErrorKind::IllFormed, "relation " + name + " expects " +
                                               std::to_string(info->arity) + " arguments");
  return detail::make_rel(name, std::move(args), positive);
}

inline Formula eq(NumTerm a, NumTerm b) { return detail::make_rel("eq", {std::move(a), std::move(b)}, true); }
inline Formula lt(NumTerm a, NumTerm b) { return detail::make_rel("lt", {std::move(a), std::move(b)}, true); }
inline Formula le(NumTerm a, NumTerm b) { return detail::make_rel("le", {std::move(a), std::move(b)}, true); }

inline Formula set_lit(const std::string& x, NumTerm arg, bool positive = true) {
  return detail::make_set(SetVarRef{false, x, 0}, std::move(arg), positive);
}

inline Formula conj(Formula a, Formula b) { return detail::make_bin(FKind::And, std::move(a), std::move(b)); }
inline Formula disj(Formula a, Formula b) { return detail::make_bin(FKind::Or, std::move(a), std::move(b)); }

inline Formula forall_num(const std::string& x, const Formula& body) {
  return detail::make_quant(FKind::AllNum, x, detail::close_num(body, x));
}
inline Formula exists_num(const std::string& x, const Formula& body) {
  return detail::make_quant(FKind::ExNum, x, detail::close_num(body, x));
}

struct FreeVars {
  std::set<std::string> num;
  std::set<std::string> set;
};

inline void collect_free_vars(const Formula& f, FreeVars& out) {
  switch (f.kind()) {
    case FKind::Rel:
      for (const auto& a : f.args())
        if (a.is_var()) out.num.insert(a.name);
      break;
    case FKind::Set:
      if (f.set_arg().is_var()) out.num.insert(f.set_arg().name);
      if (!f.set_var().bound) out.set.insert(f.set_var().name);
      break;
    case FKind::And:
    case FKind::Or:
      collect_free_vars(f.left(), out);
      collect_free_vars(f.right(), out);
      break;
    default:
      collect_free_vars(f.body(), out);
  }
}

inline FreeVars free_vars(const Formula& f) {
  FreeVars fv;
  collect_free_vars(f, fv);
  return fv;
}

namespace detail {

inline Formula close_set(const Formula& body, const std::string& x) {
  return map_setlits(body, 0, 0, [&](const Formula& lit, std::uint32_t, std::uint32_t sd) {
    const SetVarRef& v = lit.set_var();
    if (!v.bound && v.name == x)
      return make_set(SetVarRef{true, {}, sd}, lit.set_arg(), lit.positive());
    return Formula();
  });
}

inline Formula make_set_quant(FKind k, const std::string& x, const Formula& body) {
  if (body.has_second_order())
    throw ProofError(ErrorKind::IllFormed, "second-order quantifier body must not contain a second-order quantifier");
  FreeVars fv = free_vars(body);
  for (const auto& y : fv.set)
    if (y != x)
      throw ProofError(ErrorKind::IllFormed,
                       "second-order quantifier body has free set variable " + y + " besides " + x);
  return make_quant(k, x, close_set(body, x));
}

}  // namespace detail

inline Formula forall_set(const std::string& x, const Formula& body) {
  return detail::make_set_quant(FKind::AllSet, x, body);
}
inline Formula exists_set(const std::string& x, const Formula& body) {
  return detail::make_set_quant(FKind::ExSet, x, body);
}

inline Formula negate(const Formula& f) {
  switch (f.kind()) {
    case FKind::Rel: return detail::make_rel(f.relation(), f.args(), !f.positive());
    case FKind::Set: return detail::make_set(f.set_var(), f.set_arg(), !f.positive());
    case FKind::And: return detail::make_bin(FKind::Or, negate(f.left()), negate(f.right()));
    case FKind::Or: return detail::make_bin(FKind::And, negate(f.left()), negate(f.right()));
    case FKind::AllNum: return detail::make_quant(FKind::ExNum, f.hint(), negate(f.body()));
    case FKind::ExNum: return detail::make_quant(FKind::AllNum, f.hint(), negate(f.body()));
    case FKind::AllSet: return detail::make_quant(FKind::ExSet, f.hint(), negate(f.body()));
    case FKind::ExSet: return detail::make_quant(FKind::AllSet, f.hint(), negate(f.body()));
  }
  return f;
}

inline unsigned rank(const Formula& f) { return f.rank(); }

inline FormulaClass classify(const Formula& f) {
  if (f.is_literal()) return FormulaClass::Literal;
  if (!f.has_second_order()) return FormulaClass::Arithmetical;
  if (!f.has_exists_set()) return FormulaClass::Pi1;
  return FormulaClass::General;
}

inline bool is_pi1(const Formula& f) { return !f.has_exists_set(); }
inline bool is_arithmetical(const Formula& f) { return !f.has_second_order(); }

inline const char* to_string(FormulaClass c) {
  switch (c) {
    case FormulaClass::Literal: return "literal";
    case FormulaClass::Arithmetical: return "arithmetical";
    case FormulaClass::Pi1: return "pi1";
    case FormulaClass::General: return "general";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Abstractions lambda x.F; the body's bound index 0 is the parameter.

struct Abstraction {
  std::string binder;
  Formula body;

  const std::string& key() const { return body.key(); }
  friend bool operator==(const Abstraction& a, const Abstraction& b) { return a.body == b.body; }
  friend bool operator!=(const Abstraction& a, const Abstraction& b) { return !(a == b); }
};

inline Abstraction abstraction(const std::string& x, const Formula& body) {
  if (!is_arithmetical(body))
    throw ProofError(ErrorKind::IllFormed, "abstraction body must be arithmetical");
  return Abstraction{x, detail::close_num(body, x)};
}

inline Formula apply(const Abstraction& t, const NumTerm& arg) { return detail::open_num(t.body, arg); }

// ---------------------------------------------------------------------------
// Substitution and instantiation

inline Formula subst_num(const Formula& f, const std::string& x, const NumTerm& t) {
  return detail::map_terms(f, 0, [&](const NumTerm& a, std::uint32_t d) {
    if (a.base == NumTerm::Base::Free && a.name == x) return detail::shift_term(t, 0, d).plus(a.succ);
    return a;
  });
}

inline Formula subst_set(const Formula& f, const std::string& x, const Abstraction& t) {
  return detail::map_setlits(f, 0, 0, [&](const Formula& lit, std::uint32_t, std::uint32_t) {
    const SetVarRef& v = lit.set_var();
    if (v.bound || v.name != x) return Formula();
    Formula inst = apply(t, lit.set_arg());
    return lit.positive() ? inst : negate(inst);
  });
}

inline Formula rename_set(const Formula& f, const std::string& x, const std::string& y) {
  if (x == y) return f;
  return detail::map_setlits(f, 0, 0, [&](const Formula& lit, std::uint32_t, std::uint32_t) {
    const SetVarRef& v = lit.set_var();
    if (v.bound || v.name != x) return Formula();
    return detail::make_set(SetVarRef{false, y, 0}, lit.set_arg(), lit.positive());
  });
}

inline Formula rename_num(const Formula& f, const std::string& x, const std::string& y) {
  return subst_num(f, x, NumTerm::var(y));
}

// A(t) for f = forall/exists x A.
inline Formula instantiate(const Formula& f, const NumTerm& t) {
  if (f.kind() != FKind::AllNum && f.kind() != FKind::ExNum)
    throw ProofError(ErrorKind::IllFormed, "instantiate expects a number quantifier");
  return detail::open_num(f.body(), t);
}

namespace detail {
template <class Producer>
Formula open_set(const Formula& body, const Producer& produce) {
  return map_setlits(body, 0, 0, [&](const Formula& lit, std::uint32_t, std::uint32_t sd) {
    const SetVarRef& v = lit.set_var();
    if (!v.bound || v.index != sd) return Formula();
    return produce(lit);
  });
}
}  // namespace detail

// A(Y) for f = forall/exists X A.
inline Formula instantiate(const Formula& f, const std::string& y) {
  if (f.kind() != FKind::AllSet && f.kind() != FKind::ExSet)
    throw ProofError(ErrorKind::IllFormed, "instantiate expects a set quantifier");
  return detail::open_set(f.body(), [&](const Formula& lit) {
    return detail::make_set(SetVarRef{false, y, 0}, lit.set_arg(), lit.positive());
  });
}

// A(T) for f = forall/exists X A.
inline Formula instantiate(const Formula& f, const Abstraction& t) {
  if (f.kind() != FKind::AllSet && f.kind() != FKind::ExSet)
    throw ProofError(ErrorKind::IllFormed, "instantiate expects a set quantifier");
  return detail::open_set(f.body(), [&](const Formula& lit) {
    Formula inst = apply(t, lit.set_arg());
    return lit.positive() ? inst : negate(inst);
  });
}

// ---------------------------------------------------------------------------
// Literal semantics

inline bool eval_literal(const Formula& f) {
  if (f.kind() != FKind::Rel)
    throw ProofError(ErrorKind::NotClosedLiteral, "not a relation literal: " + f.key());
  std::vector<std::uint64_t> vals;
  for (const auto& a : f.args()) {
    if (!a.closed()) throw ProofError(ErrorKind::NotClosedLiteral, "literal has a variable: " + f.key());
    vals.push_back(a.value());
  }
  const RelationInfo* info = RelationTable::instance().find(f.relation());
  if (!info) throw ProofError(ErrorKind::IllFormed, "unknown relation symbol " + f.relation());
  bool v = info->decide(vals);
  return f.positive() ? v : !v;
}

namespace detail {

// s <= t for all values of the free variables (s, t have no bound indices).
inline bool always_le(const NumTerm& s, const NumTerm& t) {
  if (s.base == t.base && s.name == t.name) return s.succ <= t.succ;
  if (s.closed()) return s.succ <= t.succ;  // t = v + k >= k
  return false;
}
inline bool always_lt(const NumTerm& s, const NumTerm& t) {
  if (s.base == t.base && s.name == t.name) return s.succ < t.succ;
  if (s.closed()) return s.succ < t.succ;
  return false;
}
inline bool always_ne(const NumTerm& s, const NumTerm& t) {
  if (s.base == t.base && s.name == t.name) return s.succ != t.succ;
  if (s.closed() && t.is_var()) return s.succ < t.succ;
  if (t.closed() && s.is_var()) return t.succ < s.succ;
  return false;
}

}  // namespace detail

// True under every assignment to the literal's free number variables.
// Exact for eq/lt/le; registered relations are sampled on 0..7.
inline bool literal_valid(const Formula& f) {
  if (f.kind() != FKind::Rel) return false;
  std::set<std::string> vars;
  for (const auto& a : f.args()) {
    if (a.base == NumTerm::Base::Bound) return false;
    if (a.is_var()) vars.insert(a.name);
  }
  if (vars.empty()) return eval_literal(f);
  const std::string& r = f.relation();
  if (r == "eq" || r == "lt" || r == "le") {
    const NumTerm& s = f.args()[0];
    const NumTerm& t = f.args()[1];
    if (r == "eq") return f.positive() ? (s == t) : detail::always_ne(s, t);
    if (r == "lt") return f.positive() ? detail::always_lt(s, t) : detail::always_le(t, s);
    return f.positive() ? detail::always_le(s, t) : detail::always_lt(t, s);
  }
  std::vector<std::string> vs(vars.begin(), vars.end());
  std::vector<std::uint64_t> assign(vs.size(), 0);
  constexpr std::uint64_t kSample = 8;
  while (true) {
    Formula g = f;
    for (std::size_t i = 0; i < vs.size(); ++i) g = subst_num(g, vs[i], NumTerm::numeral(assign[i]));
    if (!eval_literal(g)) return false;
    std::size_t i = 0;
    while (i < assign.size() && ++assign[i] == kSample) assign[i++] = 0;
    if (i == assign.size()) return true;
  }
}

// Three-valued comparison for formulas with free number variables read as
// parameters: Same (syntactically equal), Never (no instance makes them
// equal), Maybe (some instance might).
enum class Unify : std::uint8_t { Same, Never, Maybe };

namespace detail {
inline Unify unify_terms(const NumTerm& a, const NumTerm& b) {
  if (a == b) return Unify::Same;
  if (a.base == NumTerm::Base::Bound || b.base == NumTerm::Base::Bound) return Unify::Never;
  if (a.base == b.base && a.name == b.name) return Unify::Never;
  if (a.closed() && b.is_var()) return a.succ >= b.succ ? Unify::Maybe : Unify::Never;
  if (b.closed() && a.is_var()) return b.succ >= a.succ ? Unify::Maybe : Unify::Never;
  return Unify::Maybe;
}

inline Unify combine(Unify a, Unify b) {
  if (a == Unify::Never || b == Unify::Never) return Unify::Never;
  if (a == Unify::Maybe || b == Unify::Maybe) return Unify::Maybe;
  return Unify::Same;
}
}  // namespace detail

inline Unify unify(const Formula& a, const Formula& b) {
  if (a == b) return Unify::Same;
  if (a.kind() != b.kind()) return Unify::Never;
  switch (a.kind()) {
    case FKind::Rel: {
      if (a.relation() != b.relation() || a.positive() != b.positive() || a.args().size() != b.args().size())
        return Unify::Never;
      Unify u = Unify::Same;
      for (std::size_t i = 0; i < a.args().size(); ++i) u = detail::combine(u, detail::unify_terms(a.args()[i], b.args()[i]));
      return u;
    }
    case FKind::Set:
      if (a.positive() != b.positive() || !(a.set_var() == b.set_var())) return Unify::Never;
      return detail::unify_terms(a.set_arg(), b.set_arg());
    case FKind::And:
    case FKind::Or:
      return detail::combine(unify(a.left(), b.left()), unify(a.right(), b.right()));
    default:
      return unify(a.body(), b.body());
  }
}

// ---------------------------------------------------------------------------
// Sequents: finite sets of formulas, kept sorted by canonical key.

class Sequent {
 public:
  Sequent() = default;
  Sequent(std::initializer_list<Formula> fs) {
    for (const auto& f : fs) insert(f);
  }
  explicit Sequent(std::vector<Formula> fs) {
    for (auto& f : fs) insert(std::move(f));
  }

  void insert(Formula f) {
    auto it = std::lower_bound(fs_.begin(), fs_.end(), f);
    if (it == fs_.end() || *it != f) fs_.insert(it, std::move(f));
  }
  void erase(const Formula& f) {
    auto it = std::lower_bound(fs_.begin(), fs_.end(), f);
    if (it != fs_.end() && *it == f) fs_.erase(it);
  }
  bool contains(const Formula& f) const { return std::binary_search(fs_.begin(), fs_.end(), f); }

  Sequent minus(const Formula& f) const {
    Sequent s = *this;
    s.erase(f);
    return s;
  }
  Sequent minus(const Sequent& o) const {
    Sequent s;
    std::set_difference(fs_.begin(), fs_.end(), o.fs_.begin(), o.fs_.end(), std::back_inserter(s.fs_));
    return s;
  }
  Sequent unite(const Sequent& o) const {
    Sequent s;
    std::set_union(fs_.begin(), fs_.end(), o.fs_.begin(), o.fs_.end(), std::back_inserter(s.fs_));
    return s;
  }
  Sequent with(const Formula& f) const {
    Sequent s = *this;
    s.insert(f);
    return s;
  }
  bool subset_of(const Sequent& o) const {
    return std::includes(o.fs_.begin(), o.fs_.end(), fs_.begin(), fs_.end());
  }

  template <class Fn>
  Sequent map(const Fn& fn) const {
    Sequent s;
    for (const auto& f : fs_) s.insert(fn(f));
    return s;
  }

  bool is_pi1() const {
    return std::all_of(fs_.begin(), fs_.end(), [](const Formula& f) { return bi::is_pi1(f); });
  }

  FreeVars free_vars() const {
    FreeVars fv;
    for (const auto& f : fs_) collect_free_vars(f, fv);
    return fv;
  }

  std::size_t size() const { return fs_.size(); }
  bool empty() const { return fs_.empty(); }
  auto begin() const { return fs_.begin(); }
  auto end() const { return fs_.end(); }
  const std::vector<Formula>& formulas() const { return fs_; }

  friend bool operator==(const Sequent& a, const Sequent& b) { return a.fs_ == b.fs_; }
  friend bool operator!=(const Sequent& a, const Sequent& b) { return !(a == b); }

 private:
  std::vector<Formula> fs_;
};

// Membership where free number variables are parameters.
inline Unify member(const Sequent& s, const Formula& f) {
  if (s.contains(f)) return Unify::Same;
  for (const auto& g : s)
    if (unify(f, g) == Unify::Maybe) return Unify::Maybe;
  return Unify::Never;
}

inline Sequent subst_set(const Sequent& s, const std::string& x, const Abstraction& t) {
  return s.map([&](const Formula& f) { return subst_set(f, x, t); });
}

}  // namespace bi
