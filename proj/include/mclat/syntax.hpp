#ifndef MCLAT_SYNTAX_HPP
#define MCLAT_SYNTAX_HPP

#include <cctype>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "point.hpp"

namespace mclat {

/// The two signatures. They share {cup, cap, bot, cz, min, max}; W adds ips,
/// L adds the endpoint maps l and r.
enum class Sig { W, L };

enum class Symbol { cup, cap, bot, cz, min, max, ips, l, r, diff };

inline int arity(Symbol s) {
  switch (s) {
    case Symbol::bot:
    case Symbol::cz: return 0;
    case Symbol::min:
    case Symbol::max:
    case Symbol::l:
    case Symbol::r: return 1;
    default: return 2;
  }
}

inline std::string_view symbol_name(Symbol s) {
  switch (s) {
    case Symbol::cup: return "cup";
    case Symbol::cap: return "cap";
    case Symbol::bot: return "bot";
    case Symbol::cz: return "cz";
    case Symbol::min: return "min";
    case Symbol::max: return "max";
    case Symbol::ips: return "ips";
    case Symbol::l: return "l";
    case Symbol::r: return "r";
    case Symbol::diff: return "diff";
  }
  return "?";
}

/// `diff` (relative complement) is an internal W-side extension and belongs to neither signature proper.
inline bool in_signature(Symbol s, Sig sig) {
  switch (s) {
    case Symbol::ips: return sig == Sig::W;
    case Symbol::l:
    case Symbol::r: return sig == Sig::L;
    case Symbol::diff: return false;
    default: return true;
  }
}

inline std::string_view sig_name(Sig s) { return s == Sig::W ? "W" : "L"; }

/// A variable or a symbol applied to argument terms. Immutable, cheap to copy.
class Term {
public:
  static Term var(std::string name) {
    auto n = std::make_shared<Node>();
    n->is_var = true;
    n->name = std::move(name);
    return Term(std::move(n));
  }

  static Term app(Symbol s, std::vector<Term> args) {
    if (static_cast<int>(args.size()) != arity(s))
      throw PreconditionError("Term::app: wrong number of arguments for " + std::string(symbol_name(s)));
    auto n = std::make_shared<Node>();
    n->sym = s;
    n->args = std::move(args);
    return Term(std::move(n));
  }

  bool is_var() const { return n_->is_var; }
  const std::string& name() const { return n_->name; }
  Symbol symbol() const { return n_->sym; }
  const std::vector<Term>& args() const { return n_->args; }
  bool is_constant() const { return !is_var() && args().empty(); }

  friend bool operator==(const Term& a, const Term& b) {
    if (a.n_ == b.n_) return true;
    if (a.is_var() != b.is_var()) return false;
    if (a.is_var()) return a.name() == b.name();
    return a.symbol() == b.symbol() && a.args() == b.args();
  }

private:
  struct Node {
    bool is_var = false;
    std::string name;
    Symbol sym = Symbol::bot;
    std::vector<Term> args;
  };
  explicit Term(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;
};

/// First-order formula over equations between terms.
class Formula {
public:
  enum class Kind { atom, negation, conjunction, disjunction, implication, exists, forall };

  /// `sugar` marks an atom written `a sub b`, i.e. cap(a,b) = a; presentation only.
  static Formula atom(Term lhs, Term rhs, bool sugar = false) {
    auto n = std::make_shared<Node>(Kind::atom);
    n->terms = {std::move(lhs), std::move(rhs)};
    n->sugar = sugar;
    return Formula(std::move(n));
  }
  static Formula negation(Formula f) { return unary(Kind::negation, std::move(f)); }
  static Formula conjunction(Formula a, Formula b) { return binary(Kind::conjunction, std::move(a), std::move(b)); }
  static Formula disjunction(Formula a, Formula b) { return binary(Kind::disjunction, std::move(a), std::move(b)); }
  static Formula implication(Formula a, Formula b) { return binary(Kind::implication, std::move(a), std::move(b)); }
  static Formula exists(std::string v, Formula body) { return quant(Kind::exists, std::move(v), std::move(body)); }
  static Formula forall(std::string v, Formula body) { return quant(Kind::forall, std::move(v), std::move(body)); }

  Kind kind() const { return n_->kind; }
  bool is_atom() const { return kind() == Kind::atom; }
  bool is_quantifier() const { return kind() == Kind::exists || kind() == Kind::forall; }
  bool is_binary() const {
    return kind() == Kind::conjunction || kind() == Kind::disjunction || kind() == Kind::implication;
  }
  const Term& lhs() const { return n_->terms[0]; }
  const Term& rhs() const { return n_->terms[1]; }
  bool sugar() const { return n_->sugar; }
  const Formula& child() const { return n_->kids[0]; }  // negation
  const Formula& left() const { return n_->kids[0]; }
  const Formula& right() const { return n_->kids[1]; }
  const Formula& body() const { return n_->kids[0]; }
  const std::string& var() const { return n_->var; }

  /// Structural equality; ignores the `sub` presentation flag.
  friend bool operator==(const Formula& a, const Formula& b) {
    if (a.n_ == b.n_) return true;
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
      case Kind::atom: return a.lhs() == b.lhs() && a.rhs() == b.rhs();
      case Kind::exists:
      case Kind::forall: return a.var() == b.var() && a.body() == b.body();
      default: return a.n_->kids == b.n_->kids;
    }
  }

private:
  struct Node {
    explicit Node(Kind k) : kind(k) {}
    Kind kind;
    std::vector<Term> terms;
    bool sugar = false;
    std::vector<Formula> kids;
    std::string var;
  };
  static Formula unary(Kind k, Formula f) {
    auto n = std::make_shared<Node>(k);
    n->kids = {std::move(f)};
    return Formula(std::move(n));
  }
  static Formula binary(Kind k, Formula a, Formula b) {
    auto n = std::make_shared<Node>(k);
    n->kids = {std::move(a), std::move(b)};
    return Formula(std::move(n));
  }
  static Formula quant(Kind k, std::string v, Formula body) {
    auto n = std::make_shared<Node>(k);
    n->var = std::move(v);
    n->kids = {std::move(body)};
    return Formula(std::move(n));
  }
  explicit Formula(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;
};

/// Short constructors for building terms and formulas in code.
namespace dsl {

inline Term var(std::string n) { return Term::var(std::move(n)); }
inline Term cup(Term a, Term b) { return Term::app(Symbol::cup, {std::move(a), std::move(b)}); }
inline Term cap(Term a, Term b) { return Term::app(Symbol::cap, {std::move(a), std::move(b)}); }
inline Term bot() { return Term::app(Symbol::bot, {}); }
inline Term cz() { return Term::app(Symbol::cz, {}); }
inline Term min(Term a) { return Term::app(Symbol::min, {std::move(a)}); }
inline Term max(Term a) { return Term::app(Symbol::max, {std::move(a)}); }
inline Term ips(Term a, Term b) { return Term::app(Symbol::ips, {std::move(a), std::move(b)}); }
inline Term l(Term a) { return Term::app(Symbol::l, {std::move(a)}); }
inline Term r(Term a) { return Term::app(Symbol::r, {std::move(a)}); }
inline Term diff(Term a, Term b) { return Term::app(Symbol::diff, {std::move(a), std::move(b)}); }

inline Formula eq(Term a, Term b) { return Formula::atom(std::move(a), std::move(b)); }
/// a sub b, i.e. cap(a,b) = a.
inline Formula sub(Term a, Term b) { return Formula::atom(cap(a, std::move(b)), a, true); }
inline Formula neg(Formula f) { return Formula::negation(std::move(f)); }
inline Formula neq(Term a, Term b) { return neg(eq(std::move(a), std::move(b))); }
inline Formula implies(Formula a, Formula b) { return Formula::implication(std::move(a), std::move(b)); }
inline Formula exists(std::string v, Formula body) { return Formula::exists(std::move(v), std::move(body)); }
inline Formula forall(std::string v, Formula body) { return Formula::forall(std::move(v), std::move(body)); }
inline Formula truth() { return eq(bot(), bot()); }
inline Formula falsity() { return eq(cz(), bot()); }

/// Left-nested conjunction; empty gives `bot = bot`.
inline Formula conj(const std::vector<Formula>& fs) {
  if (fs.empty()) return truth();
  Formula out = fs[0];
  for (std::size_t i = 1; i < fs.size(); ++i) out = Formula::conjunction(out, fs[i]);
  return out;
}
inline Formula conj(Formula a, Formula b) { return Formula::conjunction(std::move(a), std::move(b)); }

/// Left-nested disjunction; empty gives `cz = bot`.
inline Formula disj(const std::vector<Formula>& fs) {
  if (fs.empty()) return falsity();
  Formula out = fs[0];
  for (std::size_t i = 1; i < fs.size(); ++i) out = Formula::disjunction(out, fs[i]);
  return out;
}
inline Formula disj(Formula a, Formula b) { return Formula::disjunction(std::move(a), std::move(b)); }

inline Formula exists(const std::vector<std::string>& vs, Formula body) {
  for (auto it = vs.rbegin(); it != vs.rend(); ++it) body = Formula::exists(*it, std::move(body));
  return body;
}

} // namespace dsl

// ---------------------------------------------------------------------------
// Names

inline void collect_names(const Term& t, std::set<std::string>& out) {
  if (t.is_var()) {
    out.insert(t.name());
    return;
  }
  for (const auto& a : t.args()) collect_names(a, out);
}

/// Every variable name occurring anywhere, bound or free.
inline void collect_names(const Formula& f, std::set<std::string>& out) {
  switch (f.kind()) {
    case Formula::Kind::atom:
      collect_names(f.lhs(), out);
      collect_names(f.rhs(), out);
      return;
    case Formula::Kind::negation: collect_names(f.child(), out); return;
    case Formula::Kind::exists:
    case Formula::Kind::forall:
      out.insert(f.var());
      collect_names(f.body(), out);
      return;
    default:
      collect_names(f.left(), out);
      collect_names(f.right(), out);
  }
}

inline std::set<std::string> all_names(const Formula& f) {
  std::set<std::string> out;
  collect_names(f, out);
  return out;
}

inline std::set<std::string> free_vars(const Term& t) {
  std::set<std::string> out;
  collect_names(t, out);
  return out;
}

inline std::set<std::string> free_vars(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::atom: {
      auto out = free_vars(f.lhs());
      collect_names(f.rhs(), out);
      return out;
    }
    case Formula::Kind::negation: return free_vars(f.child());
    case Formula::Kind::exists:
    case Formula::Kind::forall: {
      auto out = free_vars(f.body());
      out.erase(f.var());
      return out;
    }
    default: {
      auto out = free_vars(f.left());
      auto r = free_vars(f.right());
      out.insert(r.begin(), r.end());
      return out;
    }
  }
}

/// Deterministic fresh-name generator: base name plus a counter suffix,
/// skipping anything already taken.
class NameSupply {
public:
  NameSupply() = default;
  explicit NameSupply(std::set<std::string> used) : used_(std::move(used)) {}

  void reserve(const std::string& n) { used_.insert(n); }
  void reserve(const Formula& f) { collect_names(f, used_); }
  bool taken(const std::string& n) const { return used_.count(n) != 0; }

  std::string fresh(std::string base) {
    while (base.size() > 1 && std::isdigit(static_cast<unsigned char>(base.back()))) base.pop_back();
    if (base.empty() || base == "E" || base == "A") base = "U";
    for (;;) {
      std::string cand = base + std::to_string(++counter_);
      if (used_.insert(cand).second) return cand;
    }
  }

  /// `want` itself if still free, otherwise a fresh variant of it.
  std::string claim(const std::string& want) {
    if (want != "E" && want != "A" && used_.insert(want).second) return want;
    return fresh(want);
  }

private:
  std::set<std::string> used_;
  int counter_ = 0;
};

// ---------------------------------------------------------------------------
// Substitution

inline Term substitute(const Term& t, const std::map<std::string, Term>& m) {
  if (t.is_var()) {
    auto it = m.find(t.name());
    return it == m.end() ? t : it->second;
  }
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const auto& a : t.args()) args.push_back(substitute(a, m));
  return Term::app(t.symbol(), std::move(args));
}

namespace detail {

inline Formula substitute_impl(const Formula& f, std::map<std::string, Term> m, NameSupply& names) {
  using K = Formula::Kind;
  if (m.empty()) return f;
  switch (f.kind()) {
    case K::atom: return Formula::atom(substitute(f.lhs(), m), substitute(f.rhs(), m), f.sugar());
    case K::negation: return Formula::negation(substitute_impl(f.child(), m, names));
    case K::conjunction:
      return Formula::conjunction(substitute_impl(f.left(), m, names), substitute_impl(f.right(), m, names));
    case K::disjunction:
      return Formula::disjunction(substitute_impl(f.left(), m, names), substitute_impl(f.right(), m, names));
    case K::implication:
      return Formula::implication(substitute_impl(f.left(), m, names), substitute_impl(f.right(), m, names));
    case K::exists:
    case K::forall: {
      m.erase(f.var());
      const auto body_free = free_vars(f.body());
      bool capture = false;
      for (const auto& [k, t] : m)
        if (body_free.count(k) && free_vars(t).count(f.var())) capture = true;
      std::string v = f.var();
      if (capture) {
        v = names.fresh(f.var());
        m.emplace(f.var(), Term::var(v));
      }
      Formula body = substitute_impl(f.body(), std::move(m), names);
      return f.kind() == K::exists ? Formula::exists(v, body) : Formula::forall(v, body);
    }
  }
  return f;
}

} // namespace detail

/// Capture-avoiding substitution of terms for free variables.
inline Formula substitute(const Formula& f, const std::map<std::string, Term>& m) {
  NameSupply names(all_names(f));
  for (const auto& [k, t] : m) {
    names.reserve(k);
    for (const auto& n : free_vars(t)) names.reserve(n);
  }
  return detail::substitute_impl(f, m, names);
}

/// Renames binders so that no variable is bound twice or both bound and free.
inline Formula uniquify_bound(const Formula& f) {
  NameSupply names(all_names(f));
  std::set<std::string> seen = free_vars(f);
  struct Walk {
    NameSupply& names;
    std::set<std::string>& seen;
    Formula go(const Formula& g) {
      using K = Formula::Kind;
      switch (g.kind()) {
        case K::atom: return g;
        case K::negation: return Formula::negation(go(g.child()));
        case K::conjunction: return Formula::conjunction(go(g.left()), go(g.right()));
        case K::disjunction: return Formula::disjunction(go(g.left()), go(g.right()));
        case K::implication: return Formula::implication(go(g.left()), go(g.right()));
        case K::exists:
        case K::forall: {
          std::string v = g.var();
          Formula body = g.body();
          if (!seen.insert(v).second) {
            v = names.fresh(g.var());
            seen.insert(v);
            body = substitute(body, {{g.var(), Term::var(v)}});
          }
          body = go(body);
          return g.kind() == K::exists ? Formula::exists(v, body) : Formula::forall(v, body);
        }
      }
      return g;
    }
  };
  Walk w{names, seen};
  return w.go(f);
}

// ---------------------------------------------------------------------------
// Printing

inline std::string print(const Term& t) {
  if (t.is_var()) return t.name();
  std::string out(symbol_name(t.symbol()));
  if (t.args().empty()) return out;
  out += "(";
  for (std::size_t i = 0; i < t.args().size(); ++i) {
    if (i) out += ",";
    out += print(t.args()[i]);
  }
  return out + ")";
}

namespace detail {

// Precedence: quantifier 0, -> 1, | 2, & 3, ! and atoms 4.
inline std::string print_prec(const Formula& f, int ctx) {
  using K = Formula::Kind;
  auto wrap = [&](std::string s, int own) { return own < ctx ? "(" + s + ")" : s; };
  switch (f.kind()) {
    case K::atom: {
      const Term& a = f.lhs();
      if (f.sugar() && !a.is_var() && a.symbol() == Symbol::cap && a.args()[0] == f.rhs())
        return print(a.args()[0]) + " sub " + print(a.args()[1]);
      return print(a) + " = " + print(f.rhs());
    }
    case K::negation: return "!" + print_prec(f.child(), 4);
    case K::conjunction: return wrap(print_prec(f.left(), 3) + " & " + print_prec(f.right(), 4), 3);
    case K::disjunction: return wrap(print_prec(f.left(), 2) + " | " + print_prec(f.right(), 3), 2);
    case K::implication: return wrap(print_prec(f.left(), 2) + " -> " + print_prec(f.right(), 1), 1);
    case K::exists:
    case K::forall: {
      std::string s = std::string(f.kind() == K::exists ? "E " : "A ") + f.var() + ". " + print_prec(f.body(), 0);
      return ctx > 0 ? "(" + s + ")" : s;
    }
  }
  return {};
}

} // namespace detail

inline std::string print(const Formula& f) { return detail::print_prec(f, 0); }

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

class Parser {
public:
  Parser(std::string_view text, Sig sig) : s_(text), sig_(sig) {}

  Formula parse_all() {
    Formula f = implication();
    skip();
    if (pos_ != s_.size()) throw ParseError("unexpected '" + std::string(1, s_[pos_]) + "'", pos_);
    return f;
  }

private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool peek(std::string_view tok) {
    skip();
    return s_.substr(pos_, tok.size()) == tok;
  }
  bool accept(std::string_view tok) {
    if (!peek(tok)) return false;
    pos_ += tok.size();
    return true;
  }
  void expect(std::string_view tok) {
    if (!accept(tok)) throw ParseError("expected '" + std::string(tok) + "'", pos_);
  }
  static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
  std::string peek_ident() {
    skip();
    std::size_t e = pos_;
    while (e < s_.size() && ident_char(s_[e])) ++e;
    return std::string(s_.substr(pos_, e - pos_));
  }

  Formula implication() {
    Formula lhs = disjunction();
    if (accept("->")) return Formula::implication(lhs, implication());
    return lhs;
  }
  Formula disjunction() {
    Formula f = conjunction();
    while (accept("|")) f = Formula::disjunction(f, conjunction());
    return f;
  }
  Formula conjunction() {
    Formula f = unary();
    while (accept("&")) f = Formula::conjunction(f, unary());
    return f;
  }
  Formula unary() {
    skip();
    if (accept("!")) return Formula::negation(unary());
    if (accept("(")) {
      Formula f = implication();
      expect(")");
      return f;
    }
    const std::string id = peek_ident();
    if (id == "E" || id == "A") {
      pos_ += 1;
      skip();
      const std::size_t at = pos_;
      const std::string v = peek_ident();
      if (v.empty() || !is_variable_name(v)) throw ParseError("expected a variable after quantifier", at);
      pos_ += v.size();
      expect(".");
      Formula body = implication();
      return id == "E" ? Formula::exists(v, body) : Formula::forall(v, body);
    }
    return atom();
  }
  Formula atom() {
    Term a = term();
    if (accept("=")) return Formula::atom(a, term());
    skip();
    if (peek_ident() == "sub") {
      pos_ += 3;
      Term b = term();
      return Formula::atom(Term::app(Symbol::cap, {a, b}), a, true);
    }
    throw ParseError("expected '=' or 'sub'", pos_);
  }

  static bool is_variable_name(const std::string& id) {
    return !id.empty() && std::isupper(static_cast<unsigned char>(id[0])) && id != "E" && id != "A";
  }

  Term term() {
    skip();
    const std::size_t at = pos_;
    const std::string id = peek_ident();
    if (id.empty()) throw ParseError("expected a term", at);
    if (std::isupper(static_cast<unsigned char>(id[0]))) {
      if (!is_variable_name(id)) throw ParseError("'" + id + "' is reserved for quantifiers", at);
      pos_ += id.size();
      return Term::var(id);
    }
    static const std::map<std::string, Symbol> table = {
        {"cup", Symbol::cup}, {"cap", Symbol::cap}, {"bot", Symbol::bot}, {"cz", Symbol::cz},  {"min", Symbol::min},
        {"max", Symbol::max}, {"ips", Symbol::ips}, {"l", Symbol::l},     {"r", Symbol::r}};
    auto it = table.find(id);
    if (it == table.end()) throw ParseError("unknown symbol '" + id + "'", at);
    const Symbol sym = it->second;
    if (!in_signature(sym, sig_))
      throw ParseError("symbol '" + id + "' is not in signature " + std::string(sig_name(sig_)), at);
    pos_ += id.size();
    std::vector<Term> args;
    if (arity(sym) > 0) {
      expect("(");
      args.push_back(term());
      for (int i = 1; i < arity(sym); ++i) {
        expect(",");
        args.push_back(term());
      }
      expect(")");
    }
    return Term::app(sym, std::move(args));
  }

  std::string_view s_;
  Sig sig_;
  std::size_t pos_ = 0;
};

} // namespace detail

/// Parses the ASCII formula grammar; bound variables are renamed apart if
/// they clash with each other or with free variables.
inline Formula parse(std::string_view text, Sig sig) {
  return uniquify_bound(detail::Parser(text, sig).parse_all());
}

/// Throws unless every symbol belongs to `sig`; relative complement is
/// admitted only on request (it is an auxiliary, not a signature symbol).
inline void check_signature(const Term& t, Sig sig, bool allow_diff = false) {
  if (t.is_var()) return;
  if (!in_signature(t.symbol(), sig) && !(allow_diff && t.symbol() == Symbol::diff))
    throw PreconditionError("symbol '" + std::string(symbol_name(t.symbol())) + "' is not in signature " +
                            std::string(sig_name(sig)));
  for (const auto& a : t.args()) check_signature(a, sig, allow_diff);
}

inline void check_signature(const Formula& f, Sig sig, bool allow_diff = false) {
  switch (f.kind()) {
    case Formula::Kind::atom:
      check_signature(f.lhs(), sig, allow_diff);
      check_signature(f.rhs(), sig, allow_diff);
      return;
    case Formula::Kind::negation: check_signature(f.child(), sig, allow_diff); return;
    case Formula::Kind::exists:
    case Formula::Kind::forall: check_signature(f.body(), sig, allow_diff); return;
    default:
      check_signature(f.left(), sig, allow_diff);
      check_signature(f.right(), sig, allow_diff);
  }
}

// ---------------------------------------------------------------------------
// Normal forms

namespace detail {

inline Formula nnf_impl(const Formula& f, bool negate) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::atom: return negate ? Formula::negation(f) : f;
    case K::negation: return nnf_impl(f.child(), !negate);
    case K::conjunction:
      return negate ? Formula::disjunction(nnf_impl(f.left(), true), nnf_impl(f.right(), true))
                    : Formula::conjunction(nnf_impl(f.left(), false), nnf_impl(f.right(), false));
    case K::disjunction:
      return negate ? Formula::conjunction(nnf_impl(f.left(), true), nnf_impl(f.right(), true))
                    : Formula::disjunction(nnf_impl(f.left(), false), nnf_impl(f.right(), false));
    case K::implication:
      return negate ? Formula::conjunction(nnf_impl(f.left(), false), nnf_impl(f.right(), true))
                    : Formula::disjunction(nnf_impl(f.left(), true), nnf_impl(f.right(), false));
    case K::exists:
      return negate ? Formula::forall(f.var(), nnf_impl(f.body(), true))
                    : Formula::exists(f.var(), nnf_impl(f.body(), false));
    case K::forall:
      return negate ? Formula::exists(f.var(), nnf_impl(f.body(), true))
                    : Formula::forall(f.var(), nnf_impl(f.body(), false));
  }
  return f;
}

} // namespace detail

/// Negation normal form: no implications, negation only directly on atoms.
inline Formula nnf(const Formula& f) { return detail::nnf_impl(f, false); }

struct Shape {
  bool has_exists = false;
  bool has_forall = false;
  bool has_negation = false;
};

inline void scan_shape(const Formula& f, Shape& s) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::atom: return;
    case K::negation:
      s.has_negation = true;
      scan_shape(f.child(), s);
      return;
    case K::exists:
      s.has_exists = true;
      scan_shape(f.body(), s);
      return;
    case K::forall:
      s.has_forall = true;
      scan_shape(f.body(), s);
      return;
    default:
      scan_shape(f.left(), s);
      scan_shape(f.right(), s);
  }
}

/// Shape of the negation normal form of `f`.
inline Shape shape_of(const Formula& f) {
  Shape s;
  scan_shape(nnf(f), s);
  return s;
}

enum class FormulaClass { quantifier_free, existential, positive_existential, other };

inline std::string_view class_name(FormulaClass c) {
  switch (c) {
    case FormulaClass::quantifier_free: return "quantifier_free";
    case FormulaClass::existential: return "existential";
    case FormulaClass::positive_existential: return "positive_existential";
    case FormulaClass::other: return "other";
  }
  return "?";
}

inline bool is_quantifier_free(const Formula& f) {
  auto s = shape_of(f);
  return !s.has_exists && !s.has_forall;
}
/// No universal quantifier once negations are pushed to the atoms.
inline bool is_existential(const Formula& f) { return !shape_of(f).has_forall; }
/// Built from atoms with conjunction, disjunction and existential quantifiers only (after NNF).
inline bool is_positive_existential(const Formula& f) {
  auto s = shape_of(f);
  return !s.has_forall && !s.has_negation;
}

/// Most specific class of the NNF, checked in the order positive existential,
/// quantifier-free, existential. A negation-free quantifier-free formula is
/// reported as positive existential.
inline FormulaClass classify(const Formula& f) {
  const auto s = shape_of(f);
  if (!s.has_forall && !s.has_negation) return FormulaClass::positive_existential;
  if (!s.has_forall && !s.has_exists) return FormulaClass::quantifier_free;
  if (!s.has_forall) return FormulaClass::existential;
  return FormulaClass::other;
}

namespace detail {

struct Unnester {
  NameSupply& names;
  std::vector<Formula> defs;
  std::vector<std::string> vars;

  // Returns a variable naming `t`, emitting a definition for every application.
  Term name_of(const Term& t) {
    if (t.is_var()) return t;
    Term shallow = shallow_of(t);
    std::string v = names.fresh("U");
    defs.push_back(Formula::atom(shallow, Term::var(v)));
    vars.push_back(v);
    return Term::var(v);
  }
  // A variable, or one symbol applied to variables.
  Term shallow_of(const Term& t) {
    if (t.is_var()) return t;
    std::vector<Term> args;
    args.reserve(t.args().size());
    for (const auto& a : t.args()) args.push_back(name_of(a));
    return Term::app(t.symbol(), std::move(args));
  }

  Formula literal(const Formula& atom, bool negated) {
    defs.clear();
    vars.clear();
    Term a = shallow_of(atom.lhs());
    Term b = shallow_of(atom.rhs());
    if (!a.is_var() && !b.is_var()) b = name_of(b);
    const bool sugar = !a.is_var() && a.symbol() == Symbol::cap && a.args()[0] == b;
    Formula lit = Formula::atom(a, b, sugar && atom.sugar());
    if (negated) lit = Formula::negation(lit);
    if (vars.empty()) return lit;
    std::vector<Formula> parts = defs;
    parts.push_back(lit);
    return dsl::exists(vars, dsl::conj(parts));
  }

  Formula go(const Formula& f) {
    using K = Formula::Kind;
    switch (f.kind()) {
      case K::atom: return literal(f, false);
      case K::negation: return literal(f.child(), true);
      case K::conjunction: return Formula::conjunction(go(f.left()), go(f.right()));
      case K::disjunction: return Formula::disjunction(go(f.left()), go(f.right()));
      case K::exists: return Formula::exists(f.var(), go(f.body()));
      case K::forall: return Formula::forall(f.var(), go(f.body()));
      case K::implication: break;
    }
    throw PreconditionError("unnest: unexpected implication after NNF");
  }
};

} // namespace detail

/// Rewrites every atom into one of the shapes v = w, c = v, g(v...) = w (either
/// orientation), naming nested subterms with fresh existentially quantified
/// variables. Works on the NNF, so definitions sit next to the literal and a
/// negated atom becomes E U. (defs & !atom'): existential and positive
/// existential inputs keep their class.
inline Formula unnest(const Formula& f, NameSupply& names) {
  detail::Unnester u{names, {}, {}};
  return u.go(nnf(f));
}

inline Formula unnest(const Formula& f) {
  NameSupply names(all_names(f));
  return unnest(f, names);
}

inline bool is_unnested_atom(const Formula& a) {
  auto shallow = [](const Term& t) {
    if (t.is_var()) return true;
    for (const auto& x : t.args())
      if (!x.is_var()) return false;
    return true;
  };
  return shallow(a.lhs()) && shallow(a.rhs()) && (a.lhs().is_var() || a.rhs().is_var());
}

} // namespace mclat

#endif // MCLAT_SYNTAX_HPP
