#pragma once

#include <cctype>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "bi/reduction.hpp"

namespace bi {

// ---------------------------------------------------------------------------
// Generic S-expressions

struct Sexp {
  bool is_atom = true;
  std::string atom;
  std::vector<Sexp> list;
  int line = 0, col = 0;

  static Sexp a(std::string s) {
    Sexp x;
    x.atom = std::move(s);
    return x;
  }
  static Sexp l(std::vector<Sexp> xs) {
    Sexp x;
    x.is_atom = false;
    x.list = std::move(xs);
    return x;
  }
  bool head(std::string_view h) const { return !is_atom && !list.empty() && list[0].is_atom && list[0].atom == h; }
};

namespace detail {

class Reader {
 public:
  explicit Reader(std::string_view text) : s_(text) {}

  std::vector<Sexp> read_all() {
    std::vector<Sexp> out;
    skip();
    while (pos_ < s_.size()) {
      out.push_back(read());
      skip();
    }
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { fail_at(msg, line_, col_); }
  [[noreturn]] static void fail_at(const std::string& msg, int line, int col) {
    throw ProofError(ErrorKind::ParseError,
                     msg + " at line " + std::to_string(line) + ", column " + std::to_string(col), "",
                     std::to_string(line) + ":" + std::to_string(col));
  }

  void advance() {
    if (s_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip() {
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == ';') {
        while (pos_ < s_.size() && s_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  Sexp read() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    int line = line_, col = col_;
    char c = s_[pos_];
    if (c == ')') fail("unexpected ')'");
    if (c == '(') {
      advance();
      Sexp x = Sexp::l({});
      x.line = line;
      x.col = col;
      for (;;) {
        skip();
        if (pos_ >= s_.size()) fail_at("unclosed '('", line, col);
        if (s_[pos_] == ')') {
          advance();
          return x;
        }
        x.list.push_back(read());
      }
    }
    std::string tok;
    while (pos_ < s_.size()) {
      char d = s_[pos_];
      if (std::isspace(static_cast<unsigned char>(d)) || d == '(' || d == ')' || d == ';') break;
      tok += d;
      advance();
    }
    Sexp x = Sexp::a(tok);
    x.line = line;
    x.col = col;
    return x;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

}  // namespace detail

inline std::vector<Sexp> read_sexps(std::string_view text) { return detail::Reader(text).read_all(); }

inline Sexp read_sexp(std::string_view text) {
  auto xs = read_sexps(text);
  if (xs.size() != 1)
    throw ProofError(ErrorKind::ParseError,
                     xs.empty() ? "empty input" : "expected a single expression, found " + std::to_string(xs.size()),
                     "", xs.size() > 1 ? std::to_string(xs[1].line) + ":" + std::to_string(xs[1].col) : "1:1");
  return xs[0];
}

inline std::string print_flat(const Sexp& x) {
  if (x.is_atom) return x.atom;
  std::string s = "(";
  for (std::size_t i = 0; i < x.list.size(); ++i) {
    if (i) s += ' ';
    s += print_flat(x.list[i]);
  }
  return s + ")";
}

// Breaks lists that do not fit `width` columns, one argument per line.
inline void print_pretty(const Sexp& x, std::string& out, int indent, int width) {
  std::string flat = print_flat(x);
  if (x.is_atom || static_cast<int>(flat.size()) + indent <= width) {
    out += flat;
    return;
  }
  out += "(";
  // Keep leading atoms (head and small scalar arguments) on the first line.
  std::size_t i = 0;
  while (i < x.list.size() && x.list[i].is_atom) {
    if (i) out += ' ';
    out += x.list[i].atom;
    ++i;
  }
  for (; i < x.list.size(); ++i) {
    out += '\n';
    out += std::string(indent + 2, ' ');
    print_pretty(x.list[i], out, indent + 2, width);
  }
  out += ")";
}

inline std::string print_pretty(const Sexp& x, int width = 100) {
  std::string out;
  print_pretty(x, out, 0, width);
  return out;
}

// ---------------------------------------------------------------------------
// Rendering

namespace detail {

struct Namer {
  std::vector<std::string> nums;  // innermost last
  std::vector<std::string> sets;
  FreeVars free;

  std::string pick(const std::string& base, std::size_t level, const std::set<std::string>& avoid) {
    std::string c = base + std::to_string(level);
    while (avoid.count(c)) c += "_";
    return c;
  }
};

inline Sexp term_sexp(const NumTerm& t, const Namer& nm) {
  std::string base;
  switch (t.base) {
    case NumTerm::Base::Zero: return Sexp::a(std::to_string(t.succ));
    case NumTerm::Base::Free: base = t.name; break;
    case NumTerm::Base::Bound:
      base = t.index < nm.nums.size() ? nm.nums[nm.nums.size() - 1 - t.index] : "#" + std::to_string(t.index);
      break;
  }
  Sexp x = Sexp::a(base);
  for (std::uint64_t i = 0; i < t.succ; ++i) x = Sexp::l({Sexp::a("s"), x});
  return x;
}

inline Sexp formula_sexp(const Formula& f, Namer& nm) {
  auto neg = [&](Sexp x, bool positive) { return positive ? x : Sexp::l({Sexp::a("not"), std::move(x)}); };
  switch (f.kind()) {
    case FKind::Rel: {
      Sexp x = Sexp::l({Sexp::a(f.relation())});
      for (const auto& a : f.args()) x.list.push_back(term_sexp(a, nm));
      return neg(std::move(x), f.positive());
    }
    case FKind::Set: {
      const SetVarRef& v = f.set_var();
      std::string name = !v.bound ? v.name
                                  : (v.index < nm.sets.size() ? nm.sets[nm.sets.size() - 1 - v.index]
                                                              : "$" + std::to_string(v.index));
      return neg(Sexp::l({Sexp::a("sv"), Sexp::a(name), term_sexp(f.set_arg(), nm)}), f.positive());
    }
    case FKind::And:
    case FKind::Or:
      return Sexp::l({Sexp::a(f.kind() == FKind::And ? "and" : "or"), formula_sexp(f.left(), nm),
                      formula_sexp(f.right(), nm)});
    case FKind::AllNum:
    case FKind::ExNum: {
      std::string x = nm.pick("n", nm.nums.size(), nm.free.num);
      nm.nums.push_back(x);
      Sexp body = formula_sexp(f.body(), nm);
      nm.nums.pop_back();
      return Sexp::l({Sexp::a(f.kind() == FKind::AllNum ? "all" : "ex"), Sexp::a(x), std::move(body)});
    }
    case FKind::AllSet:
    case FKind::ExSet: {
      std::string x = nm.pick("X", nm.sets.size(), nm.free.set);
      nm.sets.push_back(x);
      Sexp body = formula_sexp(f.body(), nm);
      nm.sets.pop_back();
      return Sexp::l({Sexp::a(f.kind() == FKind::AllSet ? "ALL" : "EX"), Sexp::a(x), std::move(body)});
    }
  }
  return Sexp::a("?");
}

}  // namespace detail

inline Sexp to_sexp(const Formula& f) {
  detail::Namer nm;
  nm.free = free_vars(f);
  return detail::formula_sexp(f, nm);
}

inline Sexp to_sexp(const Abstraction& t) {
  detail::Namer nm;
  nm.free = free_vars(t.body);
  std::string x = nm.pick("n", 0, nm.free.num);
  nm.nums.push_back(x);
  Sexp body = detail::formula_sexp(t.body, nm);
  return Sexp::l({Sexp::a("abs"), Sexp::a(x), std::move(body)});
}

inline Sexp to_sexp(const NumTerm& t) { return detail::term_sexp(t, {}); }

inline Sexp to_sexp(const Sequent& s) {
  Sexp x = Sexp::l({Sexp::a("seq")});
  for (const auto& f : s) x.list.push_back(to_sexp(f));
  return x;
}

inline Sexp to_sexp(const Derivation& d);

inline Sexp to_sexp(const PremiseFamily& f) {
  switch (f.kind()) {
    case FamKind::Template: return Sexp::l({Sexp::a("template"), Sexp::a(f.param()), to_sexp(f.schema())});
    case FamKind::Selector: return Sexp::l({Sexp::a("select"), to_sexp(f.parent())});
    case FamKind::MapRed: return Sexp::l({Sexp::a("mapred"), to_sexp(f.inner())});
  }
  return Sexp::a("?");
}

inline Sexp to_sexp(const Derivation& d) {
  auto A = [](const char* s) { return Sexp::a(s); };
  switch (d.kind()) {
    case DKind::Ax: return Sexp::l({A("ax"), to_sexp(d.delta())});
    case DKind::AndI: return Sexp::l({A("andI"), to_sexp(d.formula()), to_sexp(d.d0()), to_sexp(d.d1())});
    case DKind::OrI: return Sexp::l({A("orI"), Sexp::a(std::to_string(d.k())), to_sexp(d.formula()), to_sexp(d.d0())});
    case DKind::OmI: return Sexp::l({A("omI"), to_sexp(d.formula()), to_sexp(d.family())});
    case DKind::ExI: return Sexp::l({A("exI"), to_sexp(d.witness()), to_sexp(d.formula()), to_sexp(d.d0())});
    case DKind::AllSetI: return Sexp::l({A("ALLI"), Sexp::a(d.var()), to_sexp(d.formula()), to_sexp(d.d0())});
    case DKind::OrSetI: return Sexp::l({A("ORT"), to_sexp(d.abs()), to_sexp(d.formula()), to_sexp(d.d0())});
    case DKind::Cut: return Sexp::l({A("cut"), to_sexp(d.formula()), to_sexp(d.d0()), to_sexp(d.d1())});
    case DKind::R: return Sexp::l({A("r"), to_sexp(d.formula()), to_sexp(d.d0()), to_sexp(d.d1())});
    case DKind::E: return Sexp::l({A("e"), to_sexp(d.d0())});
    case DKind::Ew: return Sexp::l({A("ew"), to_sexp(d.d0())});
    case DKind::Col: return Sexp::l({A("col"), to_sexp(d.d0())});
    case DKind::Sub: return Sexp::l({A("sub"), Sexp::a(d.var()), to_sexp(d.abs()), to_sexp(d.d0())});
  }
  return Sexp::a("?");
}

inline Sexp to_sexp(const ExtendedSymbol& s) {
  Sexp x = Sexp::l({Sexp::a(to_string(s.kind))});
  switch (s.kind) {
    case SKind::AxS: x.list.push_back(to_sexp(s.delta)); break;
    case SKind::RepS: break;
    case SKind::OrS:
      x.list.push_back(Sexp::a(std::to_string(s.k)));
      x.list.push_back(to_sexp(s.formula));
      break;
    case SKind::ExS:
      x.list.push_back(to_sexp(s.witness));
      x.list.push_back(to_sexp(s.formula));
      break;
    case SKind::AllSetS:
    case SKind::OmegaTildeS:
      x.list.push_back(Sexp::a(s.eigen));
      x.list.push_back(to_sexp(s.formula));
      break;
    default: x.list.push_back(to_sexp(s.formula));
  }
  return x;
}

template <class T>
std::string render(const T& v) {
  return print_flat(to_sexp(v));
}

template <class T>
std::string render_pretty(const T& v, int width = 100) {
  return print_pretty(to_sexp(v), width);
}

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

inline bool is_ident(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'')) return false;
  return true;
}

inline bool is_numeral(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

class Parser {
 public:
  [[noreturn]] static void fail(const Sexp& at, const std::string& msg) {
    throw ProofError(ErrorKind::ParseError,
                     msg + " at line " + std::to_string(at.line) + ", column " + std::to_string(at.col), "",
                     std::to_string(at.line) + ":" + std::to_string(at.col));
  }

  // Runs a constructor, attaching the source position to its errors.
  template <class Fn>
  static auto guard(const Sexp& at, const Fn& fn) -> decltype(fn()) {
    try {
      return fn();
    } catch (const ProofError& e) {
      if (e.kind() == ErrorKind::ParseError) throw;
      throw ProofError(e.kind(),
                       e.detail() + " (line " + std::to_string(at.line) + ", column " + std::to_string(at.col) + ")",
                       e.path(), e.clause());
    }
  }

  static void arity(const Sexp& x, std::size_t n) {
    if (x.list.size() != n)
      fail(x, "'" + x.list[0].atom + "' expects " + std::to_string(n - 1) + " arguments, got " +
                  std::to_string(x.list.size() - 1));
  }

  static std::string ident(const Sexp& x, const char* what) {
    if (!x.is_atom || !is_ident(x.atom)) fail(x, std::string("expected ") + what);
    return x.atom;
  }

  static std::uint64_t numeral(const Sexp& x) {
    if (!x.is_atom || !is_numeral(x.atom)) fail(x, "expected a numeral");
    try {
      return std::stoull(x.atom);
    } catch (...) {
      fail(x, "numeral out of range");
    }
  }

  static NumTerm term(const Sexp& x) {
    if (x.is_atom) {
      if (is_numeral(x.atom)) return NumTerm::numeral(numeral(x));
      if (is_ident(x.atom)) return NumTerm::var(x.atom);
      fail(x, "expected a number term");
    }
    if (x.head("s")) {
      arity(x, 2);
      return succ(term(x.list[1]));
    }
    fail(x, "expected a number term");
  }

  static Formula formula(const Sexp& x) {
    if (x.is_atom || x.list.empty() || !x.list[0].is_atom) fail(x, "expected a formula");
    const std::string& h = x.list[0].atom;
    return guard(x, [&]() -> Formula {
      if (h == "not") {
        arity(x, 2);
        return negate(formula(x.list[1]));
      }
      if (h == "and" || h == "or") {
        arity(x, 3);
        Formula a = formula(x.list[1]), b = formula(x.list[2]);
        return h == "and" ? conj(a, b) : disj(a, b);
      }
      if (h == "all" || h == "ex") {
        arity(x, 3);
        std::string v = ident(x.list[1], "a number variable");
        Formula b = formula(x.list[2]);
        return h == "all" ? forall_num(v, b) : exists_num(v, b);
      }
      if (h == "ALL" || h == "EX") {
        arity(x, 3);
        std::string v = ident(x.list[1], "a set variable");
        Formula b = formula(x.list[2]);
        return h == "ALL" ? forall_set(v, b) : exists_set(v, b);
      }
      if (h == "sv") {
        arity(x, 3);
        return set_lit(ident(x.list[1], "a set variable"), term(x.list[2]));
      }
      if (!RelationTable::instance().find(h)) fail(x, "unknown formula head '" + h + "'");
      std::vector<NumTerm> args;
      for (std::size_t i = 1; i < x.list.size(); ++i) args.push_back(term(x.list[i]));
      return rel(h, std::move(args));
    });
  }

  static Abstraction abstraction_of(const Sexp& x) {
    if (!x.head("abs")) fail(x, "expected (abs x F)");
    arity(x, 3);
    std::string v = ident(x.list[1], "a number variable");
    Formula body = formula(x.list[2]);
    return guard(x, [&] { return abstraction(v, body); });
  }

  static Sequent sequent(const Sexp& x) {
    if (!x.head("seq")) fail(x, "expected (seq F ...)");
    Sequent s;
    for (std::size_t i = 1; i < x.list.size(); ++i) s.insert(formula(x.list[i]));
    return s;
  }

  static PremiseFamily family(const Sexp& x) {
    if (x.head("template")) {
      arity(x, 3);
      return template_family(ident(x.list[1], "a parameter name"), derivation(x.list[2]));
    }
    if (x.head("select")) {
      arity(x, 2);
      return selector(derivation(x.list[1]));
    }
    if (x.head("mapred")) {
      arity(x, 2);
      return map_red(family(x.list[1]));
    }
    fail(x, "expected a premise family (template, select or mapred)");
  }

  static Derivation derivation(const Sexp& x) {
    if (x.is_atom || x.list.empty() || !x.list[0].is_atom) fail(x, "expected a derivation");
    const std::string& h = x.list[0].atom;
    auto D = [&](std::size_t i) { return derivation(x.list[i]); };
    auto F = [&](std::size_t i) { return formula(x.list[i]); };
    Derivation d;
    if (h == "ax") {
      arity(x, 2);
      d = ax(sequent(x.list[1]));
    } else if (h == "andI") {
      arity(x, 4);
      d = and_i(F(1), D(2), D(3));
    } else if (h == "orI") {
      arity(x, 4);
      std::uint64_t k = numeral(x.list[1]);
      if (k > 1) fail(x.list[1], "orI index must be 0 or 1");
      d = or_i(static_cast<unsigned>(k), F(2), D(3));
    } else if (h == "omI") {
      arity(x, 3);
      d = om_i(F(1), family(x.list[2]));
    } else if (h == "exI") {
      arity(x, 4);
      d = ex_i(term(x.list[1]), F(2), D(3));
    } else if (h == "ALLI") {
      arity(x, 4);
      d = all_set_i(ident(x.list[1], "an eigenvariable"), F(2), D(3));
    } else if (h == "ORT") {
      arity(x, 4);
      d = or_set_i(abstraction_of(x.list[1]), F(2), D(3));
    } else if (h == "cut" || h == "r") {
      arity(x, 4);
      d = h == "cut" ? cut(F(1), D(2), D(3)) : r(F(1), D(2), D(3));
    } else if (h == "e" || h == "ew" || h == "col") {
      arity(x, 2);
      d = unary(h == "e" ? DKind::E : h == "ew" ? DKind::Ew : DKind::Col, D(1));
    } else if (h == "sub") {
      arity(x, 4);
      d = sub(ident(x.list[1], "a set variable"), abstraction_of(x.list[2]), D(3));
    } else {
      fail(x, "unknown derivation head '" + h + "'");
    }
    if (!d.well_formed())
      throw ProofError(ErrorKind::IllFormed,
                       d.malformation() + " (line " + std::to_string(x.line) + ", column " + std::to_string(x.col) + ")");
    return d;
  }
};

}  // namespace detail

inline Formula parse_formula(std::string_view text) { return detail::Parser::formula(read_sexp(text)); }
inline NumTerm parse_term(std::string_view text) { return detail::Parser::term(read_sexp(text)); }
inline Abstraction parse_abstraction(std::string_view text) {
  return detail::Parser::abstraction_of(read_sexp(text));
}
inline Sequent parse_sequent(std::string_view text) { return detail::Parser::sequent(read_sexp(text)); }

// Parses without running validate.
inline Derivation parse_derivation_unchecked(std::string_view text) {
  return detail::Parser::derivation(read_sexp(text));
}

inline Derivation parse_derivation(std::string_view text) {
  Derivation d = parse_derivation_unchecked(text);
  validate(d);
  return d;
}

// ---------------------------------------------------------------------------
// Tree views

inline std::string render_text(const TreeView& v, const std::string& prefix = "") {
  std::ostringstream os;
  std::function<void(const TreeView&, const std::string&, int)> go = [&](const TreeView& t, const std::string& idx,
                                                                          int depth) {
    os << std::string(2 * depth, ' ');
    if (!idx.empty()) os << "[" << idx << "] ";
    os << render(t.label) << "  |-  " << render(t.sequent);
    if (t.truncated) os << "  ...";
    os << '\n';
    for (const auto& [i, c] : t.children) go(c, i.is_omega ? "q " + i.q->var : i.nat.key(), depth + 1);
  };
  go(v, prefix, 0);
  return os.str();
}

struct TreeRecord {
  std::string path;
  std::string label;
  std::string sequent;
  bool truncated = false;
};

inline std::vector<TreeRecord> tree_records(const TreeView& v) {
  std::vector<TreeRecord> out;
  std::function<void(const TreeView&, const std::string&)> go = [&](const TreeView& t, const std::string& path) {
    out.push_back({path, render(t.label), render(t.sequent), t.truncated});
    for (const auto& [i, c] : t.children)
      go(c, join_path(path, i.is_omega ? "q(" + render(i.q->witness) + "," + i.q->var + ")" : i.nat.key()));
  };
  go(v, "");
  return out;
}

}  // namespace bi
