#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "bi/lang.hpp"

namespace bi {

enum class DKind : std::uint8_t { Ax, AndI, OrI, OmI, ExI, AllSetI, OrSetI, Cut, R, E, Ew, Col, Sub };

inline const char* to_string(DKind k) {
  switch (k) {
    case DKind::Ax: return "ax";
    case DKind::AndI: return "andI";
    case DKind::OrI: return "orI";
    case DKind::OmI: return "omI";
    case DKind::ExI: return "exI";
    case DKind::AllSetI: return "ALLI";
    case DKind::OrSetI: return "ORT";
    case DKind::Cut: return "cut";
    case DKind::R: return "r";
    case DKind::E: return "e";
    case DKind::Ew: return "ew";
    case DKind::Col: return "col";
    case DKind::Sub: return "sub";
  }
  return "?";
}

// Inference symbols of the infinitary system; the codomain of rule_of.
enum class SKind : std::uint8_t { AxS, AndS, OrS, OmS, ExS, AllSetS, CutS, RepS, OmegaS, OmegaTildeS };

inline const char* to_string(SKind k) {
  switch (k) {
    case SKind::AxS: return "AxS";
    case SKind::AndS: return "AndS";
    case SKind::OrS: return "OrS";
    case SKind::OmS: return "OmS";
    case SKind::ExS: return "ExS";
    case SKind::AllSetS: return "AllSetS";
    case SKind::CutS: return "CutS";
    case SKind::RepS: return "RepS";
    case SKind::OmegaS: return "OmegaS";
    case SKind::OmegaTildeS: return "OmegaTildeS";
  }
  return "?";
}

struct ExtendedSymbol {
  SKind kind = SKind::RepS;
  Sequent delta;      // AxS
  Formula formula;    // principal, cut formula, or the negated target of Omega/OmegaTilde
  unsigned k = 0;     // OrS
  NumTerm witness;    // ExS
  std::string eigen;  // AllSetS, OmegaTildeS

  static ExtendedSymbol ax(Sequent d) {
    ExtendedSymbol s;
    s.kind = SKind::AxS;
    s.delta = std::move(d);
    return s;
  }
  static ExtendedSymbol with(SKind kind, Formula f) {
    ExtendedSymbol s;
    s.kind = kind;
    s.formula = std::move(f);
    return s;
  }
  static ExtendedSymbol rep() { return ExtendedSymbol{}; }

  bool is_logical() const { return kind <= SKind::AllSetS; }

  friend bool operator==(const ExtendedSymbol& a, const ExtendedSymbol& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
      case SKind::AxS: return a.delta == b.delta;
      case SKind::RepS: return true;
      case SKind::OrS: return a.k == b.k && a.formula == b.formula;
      case SKind::ExS: return a.witness == b.witness && a.formula == b.formula;
      case SKind::AllSetS:
      case SKind::OmegaTildeS: return a.eigen == b.eigen && a.formula == b.formula;
      default: return a.formula == b.formula;
    }
  }
  friend bool operator!=(const ExtendedSymbol& a, const ExtendedSymbol& b) { return !(a == b); }
};

// Which R clause produced a symbol: principal in neither premise symbol
// (left / right pass-through), an axiom premise, or the principal case.
enum class RCase : std::uint8_t { None, PassLeft, PassRight, AxLeft, AxRight, Principal };

struct RuleInfo {
  ExtendedSymbol symbol;
  RCase rcase = RCase::None;
  bool swapped = false;  // principal case read with the premises exchanged
  // Set when some membership decision behind the symbol compared formulas
  // whose free number variables could make them coincide at an instance.
  bool sensitive = false;
};

class Derivation;
class PremiseFamily;

namespace detail {
struct DerivNode;
struct FamilyNode;
}  // namespace detail

class Derivation {
 public:
  Derivation() = default;
  explicit Derivation(std::shared_ptr<const detail::DerivNode> n) : node_(std::move(n)) {}

  bool valid() const { return node_ != nullptr; }
  const detail::DerivNode* get() const { return node_.get(); }
  const detail::DerivNode& node() const { return *node_; }

  DKind kind() const;
  const Sequent& delta() const;
  const Formula& formula() const;
  unsigned k() const;
  const NumTerm& witness() const;
  const std::string& var() const;
  const Abstraction& abs() const;
  const Derivation& d0() const;
  const Derivation& d1() const;
  const PremiseFamily& family() const;

  // Structural end-sequent and cut-degree; throw IllFormed for malformed nodes.
  const Sequent& end_sequent() const;
  unsigned degree() const;
  bool well_formed() const;
  const std::string& malformation() const;

 private:
  std::shared_ptr<const detail::DerivNode> node_;
};

enum class FamKind : std::uint8_t { Template, Selector, MapRed };

class PremiseFamily {
 public:
  PremiseFamily() = default;
  explicit PremiseFamily(std::shared_ptr<const detail::FamilyNode> n) : node_(std::move(n)) {}

  bool valid() const { return node_ != nullptr; }
  const detail::FamilyNode* get() const { return node_.get(); }

  FamKind kind() const;
  const std::string& param() const;
  const Derivation& schema() const;
  const Derivation& parent() const;
  const PremiseFamily& inner() const;

 private:
  std::shared_ptr<const detail::FamilyNode> node_;
};

namespace detail {

struct FamilyNode {
  FamKind kind = FamKind::Template;
  std::string param;
  Derivation sub;  // schema or parent
  PremiseFamily inner;
};

struct DerivNode {
  DKind kind = DKind::Ax;
  Sequent delta;
  Formula formula;
  unsigned k = 0;
  NumTerm witness;
  std::string var;
  Abstraction abs;
  Derivation d0, d1;
  PremiseFamily family;

  Sequent end;
  unsigned degree = 0;
  std::string error;  // non-empty when the node is malformed

  mutable std::once_flag rule_once;
  mutable std::optional<RuleInfo> rule;
};

}  // namespace detail

inline DKind Derivation::kind() const { return node_->kind; }
inline const Sequent& Derivation::delta() const { return node_->delta; }
inline const Formula& Derivation::formula() const { return node_->formula; }
inline unsigned Derivation::k() const { return node_->k; }
inline const NumTerm& Derivation::witness() const { return node_->witness; }
inline const std::string& Derivation::var() const { return node_->var; }
inline const Abstraction& Derivation::abs() const { return node_->abs; }
inline const Derivation& Derivation::d0() const { return node_->d0; }
inline const Derivation& Derivation::d1() const { return node_->d1; }
inline const PremiseFamily& Derivation::family() const { return node_->family; }
inline bool Derivation::well_formed() const { return node_->error.empty(); }
inline const std::string& Derivation::malformation() const { return node_->error; }
inline const Sequent& Derivation::end_sequent() const {
  if (!node_->error.empty()) throw ProofError(ErrorKind::IllFormed, node_->error);
  return node_->end;
}
inline unsigned Derivation::degree() const {
  if (!node_->error.empty()) throw ProofError(ErrorKind::IllFormed, node_->error);
  return node_->degree;
}

inline FamKind PremiseFamily::kind() const { return node_->kind; }
inline const std::string& PremiseFamily::param() const { return node_->param; }
inline const Derivation& PremiseFamily::schema() const { return node_->sub; }
inline const Derivation& PremiseFamily::parent() const { return node_->sub; }
inline const PremiseFamily& PremiseFamily::inner() const { return node_->inner; }

// ---------------------------------------------------------------------------
// Construction. Nodes compute their end-sequent and degree eagerly; a node
// whose data does not fit its kind is kept but marked malformed.

namespace detail {

struct FamilyShape {
  Sequent side;
  unsigned degree = 0;
  std::string error;
};

inline FamilyShape family_shape(const PremiseFamily& f, const Formula& principal) {
  FamilyShape out;
  switch (f.kind()) {
    case FamKind::Template: {
      const Derivation& s = f.schema();
      if (!s.well_formed()) return FamilyShape{{}, 0, s.malformation()};
      Formula minor = instantiate(principal, NumTerm::var(f.param()));
      out.side = s.end_sequent().minus(minor);
      out.degree = s.degree();
      if (out.side.free_vars().num.count(f.param()))
        out.error = "template parameter " + f.param() + " occurs in the side sequent";
      return out;
    }
    case FamKind::Selector: {
      const Derivation& p = f.parent();
      if (!p.well_formed()) return FamilyShape{{}, 0, p.malformation()};
      out.side = p.end_sequent();
      out.degree = p.degree();
      return out;
    }
    case FamKind::MapRed: return family_shape(f.inner(), principal);
  }
  return out;
}

inline Derivation finish(std::shared_ptr<DerivNode> n) {
  auto bad = [&](std::string msg) {
    n->error = std::move(msg);
    return Derivation(std::move(n));
  };
  bool binary = n->kind == DKind::AndI || n->kind == DKind::Cut || n->kind == DKind::R;
  bool leaf = n->kind == DKind::Ax || n->kind == DKind::OmI;
  if (!leaf && !n->d0.valid()) return bad("missing premise");
  if (binary && !n->d1.valid()) return bad("missing premise");
  for (const Derivation* c : {&n->d0, &n->d1})
    if (c->valid() && !c->well_formed()) return bad(c->malformation());

  auto need = [&](FKind k, const char* what) {
    return n->formula.valid() && n->formula.kind() == k ? std::string() : std::string(what);
  };
  const Derivation& a = n->d0;
  const Derivation& b = n->d1;
  switch (n->kind) {
    case DKind::Ax:
      n->end = n->delta;
      break;
    case DKind::AndI: {
      if (auto e = need(FKind::And, "andI principal must be a conjunction"); !e.empty()) return bad(e);
      n->end = a.end_sequent().minus(n->formula.left()).unite(b.end_sequent().minus(n->formula.right())).with(n->formula);
      n->degree = std::max(a.degree(), b.degree());
      break;
    }
    case DKind::OrI: {
      if (auto e = need(FKind::Or, "orI principal must be a disjunction"); !e.empty()) return bad(e);
      if (n->k > 1) return bad("orI index must be 0 or 1");
      n->end = a.end_sequent().minus(n->k == 0 ? n->formula.left() : n->formula.right()).with(n->formula);
      n->degree = a.degree();
      break;
    }
    case DKind::OmI: {
      if (auto e = need(FKind::AllNum, "omI principal must be a number universal"); !e.empty()) return bad(e);
      if (!n->family.valid()) return bad("omI without premise family");
      FamilyShape fs = family_shape(n->family, n->formula);
      if (!fs.error.empty()) return bad(fs.error);
      n->end = fs.side.with(n->formula);
      n->degree = fs.degree;
      break;
    }
    case DKind::ExI: {
      if (auto e = need(FKind::ExNum, "exI principal must be a number existential"); !e.empty()) return bad(e);
      n->end = a.end_sequent().minus(instantiate(n->formula, n->witness)).with(n->formula);
      n->degree = a.degree();
      break;
    }
    case DKind::AllSetI: {
      if (auto e = need(FKind::AllSet, "ALLI principal must be a set universal"); !e.empty()) return bad(e);
      n->end = a.end_sequent().minus(instantiate(n->formula, n->var)).with(n->formula);
      n->degree = a.degree();
      break;
    }
    case DKind::OrSetI: {
      if (auto e = need(FKind::ExSet, "ORT principal must be a negated set universal"); !e.empty()) return bad(e);
      if (!n->abs.body.valid() || !is_arithmetical(n->abs.body)) return bad("ORT abstraction must be arithmetical");
      Formula minor = instantiate(n->formula, n->abs);
      n->end = a.end_sequent().minus(minor).with(n->formula);
      n->degree = std::max(minor.rank(), a.degree());
      break;
    }
    case DKind::Cut:
    case DKind::R: {
      if (!n->formula.valid()) return bad("cut formula missing");
      n->end = a.end_sequent().minus(n->formula).unite(b.end_sequent().minus(negate(n->formula)));
      unsigned r = n->formula.rank() + (n->kind == DKind::Cut ? 1 : 0);
      n->degree = std::max({r, a.degree(), b.degree()});
      break;
    }
    case DKind::E:
      n->end = a.end_sequent();
      n->degree = a.degree() == 0 ? 0 : a.degree() - 1;
      break;
    case DKind::Ew:
      n->end = a.end_sequent();
      n->degree = 0;
      break;
    case DKind::Col:
      n->end = a.end_sequent();
      n->degree = a.degree();
      break;
    case DKind::Sub:
      if (!n->abs.body.valid() || !is_arithmetical(n->abs.body)) return bad("sub abstraction must be arithmetical");
      n->end = subst_set(a.end_sequent(), n->var, n->abs);
      n->degree = a.degree();
      break;
  }
  return Derivation(std::move(n));
}

inline std::shared_ptr<DerivNode> node(DKind k) {
  auto n = std::make_shared<DerivNode>();
  n->kind = k;
  return n;
}

}  // namespace detail

inline Derivation ax(Sequent delta) {
  auto n = detail::node(DKind::Ax);
  n->delta = std::move(delta);
  return detail::finish(std::move(n));
}

inline Derivation and_i(Formula f, Derivation d0, Derivation d1) {
  auto n = detail::node(DKind::AndI);
  n->formula = std::move(f);
  n->d0 = std::move(d0);
  n->d1 = std::move(d1);
  return detail::finish(std::move(n));
}

inline Derivation or_i(unsigned k, Formula f, Derivation d0) {
  auto n = detail::node(DKind::OrI);
  n->k = k;
  n->formula = std::move(f);
  n->d0 = std::move(d0);
  return detail::finish(std::move(n));
}

inline Derivation om_i(Formula f, PremiseFamily family) {
  auto n = detail::node(DKind::OmI);
  n->formula = std::move(f);
  n->family = std::move(family);
  return detail::finish(std::move(n));
}

inline Derivation ex_i(NumTerm k, Formula f, Derivation d0) {
  auto n = detail::node(DKind::ExI);
  n->witness = std::move(k);
  n->formula = std::move(f);
  n->d0 = std::move(d0);
  return detail::finish(std::move(n));
}
inline Derivation ex_i(std::uint64_t k, Formula f, Derivation d0) {
  return ex_i(NumTerm::numeral(k), std::move(f), std::move(d0));
}

inline Derivation all_set_i(std::string eigen, Formula f, Derivation d0) {
  auto n = detail::node(DKind::AllSetI);
  n->var = std::move(eigen);
  n->formula = std::move(f);
  n->d0 = std::move(d0);
  return detail::finish(std::move(n));
}

inline Derivation or_set_i(Abstraction t, Formula f, Derivation d0) {
  auto n = detail::node(DKind::OrSetI);
  n->abs = std::move(t);
  n->formula = std::move(f);
  n->d0 = std::move(d0);
  return detail::finish(std::move(n));
}

inline Derivation cut(Formula c, Derivation d0, Derivation d1) {
  auto n = detail::node(DKind::Cut);
  n->formula = std::move(c);
  n->d0 = std::move(d0);
  n->d1 = std::move(d1);
  return detail::finish(std::move(n));
}

inline Derivation r(Formula c, Derivation d0, Derivation d1) {
  auto n = detail::node(DKind::R);
  n->formula = std::move(c);
  n->d0 = std::move(d0);
  n->d1 = std::move(d1);
  return detail::finish(std::move(n));
}

inline Derivation unary(DKind k, Derivation d0) {
  auto n = detail::node(k);
  n->d0 = std::move(d0);
  return detail::finish(std::move(n));
}

inline Derivation e(Derivation d0) { return unary(DKind::E, std::move(d0)); }
inline Derivation ew(Derivation d0) { return unary(DKind::Ew, std::move(d0)); }
inline Derivation col(Derivation d0) { return unary(DKind::Col, std::move(d0)); }

// E applied n times.
inline Derivation e_pow(unsigned n, Derivation d0) {
  for (unsigned i = 0; i < n; ++i) d0 = e(std::move(d0));
  return d0;
}

inline Derivation sub(std::string x, Abstraction t, Derivation d0) {
  auto n = detail::node(DKind::Sub);
  n->var = std::move(x);
  n->abs = std::move(t);
  n->d0 = std::move(d0);
  return detail::finish(std::move(n));
}

inline PremiseFamily template_family(std::string param, Derivation schema) {
  auto n = std::make_shared<detail::FamilyNode>();
  n->kind = FamKind::Template;
  n->param = std::move(param);
  n->sub = std::move(schema);
  return PremiseFamily(std::move(n));
}

inline PremiseFamily selector(Derivation parent) {
  auto n = std::make_shared<detail::FamilyNode>();
  n->kind = FamKind::Selector;
  n->sub = std::move(parent);
  return PremiseFamily(std::move(n));
}

inline PremiseFamily map_red(PremiseFamily inner) {
  auto n = std::make_shared<detail::FamilyNode>();
  n->kind = FamKind::MapRed;
  n->inner = std::move(inner);
  return PremiseFamily(std::move(n));
}

inline bool is_logical(DKind k) { return k <= DKind::AllSetI; }

}  // namespace bi
