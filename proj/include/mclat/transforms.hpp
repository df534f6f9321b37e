#ifndef MCLAT_TRANSFORMS_HPP
#define MCLAT_TRANSFORMS_HPP

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "syntax.hpp"

namespace mclat {

/// A formula lies outside the fragment a transformation supports. `var` names
/// the offending universally quantified variable when there is one.
class FragmentError : public std::runtime_error {
public:
  explicit FragmentError(const std::string& what, std::string var = {})
      : std::runtime_error(what), var_(std::move(var)) {}
  const std::string& var() const noexcept { return var_; }

private:
  std::string var_;
};

/// Names of the two finite-set coordinates (left and right endpoints) of an
/// interval-set variable.
struct CoordinatePair {
  std::string left_var;
  std::string right_var;
};

// ---------------------------------------------------------------------------
// Building blocks

/// Symmetric difference (q1 \ q2) u (q2 \ q1) as an extended term.
inline Term delta_term(const Term& q1, const Term& q2) {
  using namespace dsl;
  return cup(diff(q1, q2), diff(q2, q1));
}

/// C = A \ B, stated with equations only.
inline Formula relcomp(const Term& c, const Term& a, const Term& b) {
  using namespace dsl;
  return conj(eq(cup(cap(a, b), c), a), eq(cap(b, c), bot()));
}

/// Positive stand-in for A != bot: A = cz or cz sub ips(A u cz, A).
inline Formula notbot_rhs(const Term& a) {
  using namespace dsl;
  return disj(eq(a, cz()), sub(cz(), ips(cup(a, cz()), a)));
}

// ---------------------------------------------------------------------------
// Simplification

namespace detail {

inline bool is_true_atom(const Formula& f) { return f.is_atom() && f.lhs() == f.rhs(); }
inline bool is_false_atom(const Formula& f) {
  return f.is_atom() && f.lhs().is_constant() && f.rhs().is_constant() && !(f.lhs() == f.rhs());
}

// Denotes a finite set under every assignment in L, where variables may be unbounded.
inline bool finite_term(const Term& t) {
  if (t.is_var()) return false;
  switch (t.symbol()) {
    case Symbol::bot:
    case Symbol::cz:
    case Symbol::min:
    case Symbol::max:
    case Symbol::l:
    case Symbol::r: return true;
    case Symbol::cup: return finite_term(t.args()[0]) && finite_term(t.args()[1]);
    case Symbol::cap: return finite_term(t.args()[0]) || finite_term(t.args()[1]);
    default: return false;
  }
}

inline Term simplify_term(const Term& t) {
  using namespace dsl;
  if (t.is_var() || t.is_constant()) return t;
  std::vector<Term> a;
  for (const auto& x : t.args()) a.push_back(simplify_term(x));
  auto is = [](const Term& x, Symbol s) { return !x.is_var() && x.symbol() == s; };
  switch (t.symbol()) {
    case Symbol::cup:
      if (is(a[0], Symbol::bot)) return a[1];
      if (is(a[1], Symbol::bot) || a[0] == a[1]) return a[0];
      break;
    case Symbol::cap:
      if (is(a[0], Symbol::bot) || is(a[1], Symbol::bot)) return bot();
      if (a[0] == a[1]) return a[0];
      break;
    case Symbol::min:
    case Symbol::max:
      if (a[0].is_constant()) return a[0];
      break;
    case Symbol::l:
    case Symbol::r:
      if (finite_term(a[0])) return a[0];
      break;
    case Symbol::ips:
      if (is(a[0], Symbol::bot) || is(a[1], Symbol::bot)) return bot();
      break;
    case Symbol::diff:
      if (is(a[0], Symbol::bot) || a[0] == a[1]) return bot();
      if (is(a[1], Symbol::bot)) return a[0];
      break;
    default: break;
  }
  return Term::app(t.symbol(), std::move(a));
}

} // namespace detail

namespace detail {

inline void conjuncts(const Formula& f, std::vector<Formula>& out) {
  if (f.kind() == Formula::Kind::conjunction) {
    conjuncts(f.left(), out);
    conjuncts(f.right(), out);
  } else {
    out.push_back(f);
  }
}

// E v. (... & v = t & ...)  ==  (...)[t/v] when t does not mention v.
inline std::optional<Formula> one_point(const std::string& v, const Formula& body) {
  std::vector<Formula> cs;
  conjuncts(body, cs);
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (!cs[i].is_atom()) continue;
    const Term& a = cs[i].lhs();
    const Term& b = cs[i].rhs();
    const Term* t = nullptr;
    if (a.is_var() && a.name() == v && !free_vars(b).count(v)) t = &b;
    else if (b.is_var() && b.name() == v && !free_vars(a).count(v)) t = &a;
    if (!t) continue;
    std::vector<Formula> rest;
    for (std::size_t j = 0; j < cs.size(); ++j)
      if (j != i) rest.push_back(cs[j]);
    if (rest.empty()) return dsl::truth();
    return substitute(dsl::conj(rest), {{v, *t}});
  }
  return std::nullopt;
}

} // namespace detail

/// Constant folding over bot/cz, idempotent and absorbing term rewrites, and
/// removal of vacuous quantifiers. Preserves truth in both structures.
inline Formula simplify(const Formula& f) {
  using K = Formula::Kind;
  using namespace dsl;
  using detail::is_false_atom;
  using detail::is_true_atom;
  switch (f.kind()) {
    case K::atom: {
      Term a = detail::simplify_term(f.lhs());
      Term b = detail::simplify_term(f.rhs());
      if (a == b) return truth();
      if (a.is_constant() && b.is_constant()) return falsity();
      const bool sugar = f.sugar() && !a.is_var() && a.symbol() == Symbol::cap && a.args()[0] == b;
      return Formula::atom(a, b, sugar);
    }
    case K::negation: {
      Formula c = simplify(f.child());
      if (is_true_atom(c)) return falsity();
      if (is_false_atom(c)) return truth();
      return neg(c);
    }
    case K::conjunction: {
      Formula a = simplify(f.left()), b = simplify(f.right());
      if (is_false_atom(a) || is_false_atom(b)) return falsity();
      if (is_true_atom(a)) return b;
      if (is_true_atom(b) || a == b) return a;
      return conj(a, b);
    }
    case K::disjunction: {
      Formula a = simplify(f.left()), b = simplify(f.right());
      if (is_true_atom(a) || is_true_atom(b)) return truth();
      if (is_false_atom(a)) return b;
      if (is_false_atom(b) || a == b) return a;
      return disj(a, b);
    }
    case K::implication: {
      Formula a = simplify(f.left()), b = simplify(f.right());
      if (is_false_atom(a) || is_true_atom(b)) return truth();
      if (is_true_atom(a)) return b;
      if (is_false_atom(b)) return neg(a);
      return implies(a, b);
    }
    case K::exists:
    case K::forall: {
      Formula b = simplify(f.body());
      if (is_true_atom(b) || is_false_atom(b) || !free_vars(b).count(f.var())) return b;
      if (f.kind() == K::exists) {
        if (auto r = detail::one_point(f.var(), b)) return simplify(*r);
        return Formula::exists(f.var(), b);
      }
      return Formula::forall(f.var(), b);
    }
  }
  return f;
}

// ---------------------------------------------------------------------------
// Positive existential form in W

namespace detail {

struct DiffEliminator {
  NameSupply& names;
  std::vector<std::string> vars;
  std::vector<Formula> defs;

  Term go(const Term& t) {
    if (t.is_var() || t.is_constant()) return t;
    std::vector<Term> a;
    for (const auto& x : t.args()) a.push_back(go(x));
    if (t.symbol() != Symbol::diff) return Term::app(t.symbol(), std::move(a));
    const std::string c = names.fresh("C");
    vars.push_back(c);
    defs.push_back(relcomp(Term::var(c), a[0], a[1]));
    return Term::var(c);
  }

  // E C1..Ck (C1 = A1 \ B1 & ... & lit'), where lit' has no relative complement.
  template <class Wrap>
  Formula literal(const Formula& atom, Wrap&& wrap) {
    vars.clear();
    defs.clear();
    Term a = go(atom.lhs());
    Term b = go(atom.rhs());
    const bool sugar = atom.sugar() && !a.is_var() && a.symbol() == Symbol::cap && a.args()[0] == b;
    std::vector<std::string> vs = vars;
    std::vector<Formula> parts = defs;
    parts.push_back(wrap(Formula::atom(a, b, sugar)));
    if (vs.empty()) return parts.back();
    return dsl::exists(vs, dsl::conj(parts));
  }
};

inline Formula posex_impl(const Formula& f, NameSupply& names) {
  using K = Formula::Kind;
  using namespace dsl;
  switch (f.kind()) {
    case K::atom: {
      DiffEliminator d{names, {}, {}};
      return d.literal(f, [](Formula a) { return a; });
    }
    case K::negation: {
      // !(q1 = q2)  ==  E Y. ((Y = cz | cz sub ips(Y u cz, Y)) & Y sub delta(q1, q2))
      const Formula& a = f.child();
      const std::string y = names.fresh("Y");
      Formula witness = sub(var(y), delta_term(a.lhs(), a.rhs()));
      DiffEliminator d{names, {}, {}};
      Formula positive = d.literal(witness, [](Formula x) { return x; });
      return exists(y, conj(notbot_rhs(var(y)), positive));
    }
    case K::conjunction: return conj(posex_impl(f.left(), names), posex_impl(f.right(), names));
    case K::disjunction: return disj(posex_impl(f.left(), names), posex_impl(f.right(), names));
    case K::exists: return Formula::exists(f.var(), posex_impl(f.body(), names));
    case K::forall:
      throw FragmentError("universal quantifier over " + f.var() + " has no positive existential rewriting here",
                          f.var());
    case K::implication: break;
  }
  throw PreconditionError("to_positive_existential: implication survived NNF");
}

} // namespace detail

/// Rewrites a W-formula without essential universal quantifiers into an
/// equivalent positive existential one: negated equations become nonempty
/// witnesses inside the symmetric difference, and relative complements become
/// existentially quantified variables pinned down by two equations.
inline Formula to_positive_existential(const Formula& f, NameSupply& names) {
  check_signature(f, Sig::W, /*allow_diff=*/true);
  Formula g = uniquify_bound(f);
  names.reserve(g);
  return detail::posex_impl(nnf(g), names);
}

inline Formula to_positive_existential(const Formula& f) {
  NameSupply names(all_names(f));
  return to_positive_existential(f, names);
}

// ---------------------------------------------------------------------------
// Closed-form W-formulas for the interval-set coordinates

namespace detail {

inline Term boundary_term(const Term& xl, const Term& xr) { return dsl::cup(xl, xr); }

// ips(dX u Z, Z) sub X_l \ X_r  and  ips(dX u Z, X_r \ X_l) n Z != bot
inline Formula between_endpoints(const Term& xl, const Term& xr, const Term& z, NameSupply& names) {
  using namespace dsl;
  const Term dz = cup(boundary_term(xl, xr), z);
  const std::string pl = names.fresh("P");
  const std::string pr = names.fresh("P");
  return exists({pl, pr}, conj({relcomp(var(pl), xl, xr), relcomp(var(pr), xr, xl), sub(ips(dz, z), var(pl)),
                                neq(cap(ips(dz, var(pr)), z), bot())}));
}

inline Formula bounded_of(const Term& xl, const Term& xr) {
  using namespace dsl;
  const Term d = boundary_term(xl, xr);
  return disj(eq(d, bot()), sub(max(d), xr));
}

inline Formula unbounded_of(const Term& xl, const Term& xr) {
  using namespace dsl;
  const Term d = boundary_term(xl, xr);
  return conj(neq(d, bot()), eq(cap(max(d), xr), bot()));
}

} // namespace detail

/// Singleton Z lies strictly between a proper left endpoint and the next
/// proper right endpoint of the bounded set with coordinates (xl, xr).
inline Formula phi_bdd_member(const Term& xl, const Term& xr, const Term& z, NameSupply& names) {
  return detail::between_endpoints(xl, xr, z, names);
}

/// As above, or Z is at least every endpoint (the unbounded tail).
inline Formula phi_nbdd_member(const Term& xl, const Term& xr, const Term& z, NameSupply& names) {
  using namespace dsl;
  return disj(detail::between_endpoints(xl, xr, z, names), eq(z, max(cup(detail::boundary_term(xl, xr), z))));
}

/// Membership of the singleton Z in the interval set with coordinates (xl, xr).
inline Formula phi_in(const Term& xl, const Term& xr, const Term& z, NameSupply& names) {
  using namespace dsl;
  const Term d = detail::boundary_term(xl, xr);
  return conj(neq(d, bot()),
              disj({sub(z, d), conj(detail::bounded_of(xl, xr), phi_bdd_member(xl, xr, z, names)),
                    conj(detail::unbounded_of(xl, xr), phi_nbdd_member(xl, xr, z, names))}));
}

/// Z is a singleton.
inline Formula at(const Term& z) {
  using namespace dsl;
  return conj(neq(z, bot()), eq(z, min(z)));
}

/// Every singleton in X is in Y.
inline Formula phi_subseteq(const Term& xl, const Term& xr, const Term& yl, const Term& yr, NameSupply& names) {
  using namespace dsl;
  const std::string z = names.fresh("Z");
  return forall(z, implies(at(var(z)), implies(phi_in(xl, xr, var(z), names), phi_in(yl, yr, var(z), names))));
}

/// (B, C) is the pair of endpoint sets of a nonempty interval set.
inline Formula delta_domain(const Term& b, const Term& c, NameSupply& names) {
  using namespace dsl;
  const std::string p = names.fresh("P");
  const std::string q = names.fresh("Q");
  const Term bc = cup(b, c);
  const Formula case_a = conj(sub(max(bc), c), eq(ips(bc, var(q)), var(p)));
  const Formula case_b = conj(sub(max(bc), var(p)), eq(cup(ips(bc, var(q)), max(bc)), var(p)));
  return exists({p, q}, conj({relcomp(var(p), b, c), relcomp(var(q), c, b), neq(b, bot()), sub(min(bc), b),
                              disj(case_a, case_b)}));
}

namespace detail {

inline NameSupply supply_for(std::initializer_list<const char*> reserved) {
  NameSupply n;
  for (const char* s : reserved) n.reserve(s);
  return n;
}

} // namespace detail

inline Formula phi_in() {
  using dsl::var;
  auto n = detail::supply_for({"X_l", "X_r", "Z"});
  return phi_in(var("X_l"), var("X_r"), var("Z"), n);
}
inline Formula phi_bdd_member() {
  using dsl::var;
  auto n = detail::supply_for({"X_l", "X_r", "Z"});
  return phi_bdd_member(var("X_l"), var("X_r"), var("Z"), n);
}
inline Formula phi_nbdd_member() {
  using dsl::var;
  auto n = detail::supply_for({"X_l", "X_r", "Z"});
  return phi_nbdd_member(var("X_l"), var("X_r"), var("Z"), n);
}
inline Formula at() { return at(dsl::var("Z")); }
inline Formula phi_subseteq() {
  using dsl::var;
  auto n = detail::supply_for({"X_l", "X_r", "Y_l", "Y_r"});
  return phi_subseteq(var("X_l"), var("X_r"), var("Y_l"), var("Y_r"), n);
}
inline Formula delta_domain() {
  using dsl::var;
  auto n = detail::supply_for({"X_l", "X_r"});
  return delta_domain(var("X_l"), var("X_r"), n);
}

// ---------------------------------------------------------------------------
// ips in L

/// Existential L-formula for ips(X, Y) = Z on finite arguments. With
/// B = Y n X: either B and Z are empty, or some D has right endpoints Z,
/// contains X, and has left endpoints (B \ min B) u cz when min X is in Y and
/// B u cz otherwise. Z must lie in X and avoid max X, which never has a
/// successor.
inline Formula phi_ips(const Term& x, const Term& y, const Term& z, NameSupply& names) {
  using namespace dsl;
  const Term b = cap(y, x);
  const Term mb = min(b);
  auto tail = [&](const Term& d) { return conj({eq(r(d), z), sub(x, d), eq(cap(max(x), z), bot())}); };
  const Formula empty_case = conj(eq(b, bot()), eq(z, bot()));
  const std::string d1 = names.fresh("D"), e1 = names.fresh("E");
  const Formula min_in =
      conj({neq(b, bot()), sub(min(x), y),
            exists({d1, e1}, conj({eq(l(var(d1)), var(e1)), eq(cup(var(e1), mb), cup(b, cz())),
                                   sub(cap(var(e1), mb), cz()), tail(var(d1))}))});
  const std::string d2 = names.fresh("D");
  const Formula min_out = conj({neq(b, bot()), eq(cap(min(x), y), bot()),
                                exists(d2, conj(eq(l(var(d2)), cup(b, cz())), tail(var(d2))))});
  return conj(sub(z, x), disj({empty_case, min_in, min_out}));
}

inline Formula phi_ips() {
  using dsl::var;
  auto n = detail::supply_for({"X", "Y", "Z"});
  return phi_ips(var("X"), var("Y"), var("Z"), n);
}

// ---------------------------------------------------------------------------
// W -> L

namespace detail {

inline Formula w_to_l_impl(const Formula& f, NameSupply& names) {
  using K = Formula::Kind;
  using namespace dsl;
  switch (f.kind()) {
    case K::atom: {
      const Term& a = f.lhs();
      const Term& b = f.rhs();
      if (!a.is_var() && a.symbol() == Symbol::ips) return phi_ips(a.args()[0], a.args()[1], b, names);
      if (!b.is_var() && b.symbol() == Symbol::ips) return phi_ips(b.args()[0], b.args()[1], a, names);
      return f;
    }
    case K::conjunction: return conj(w_to_l_impl(f.left(), names), w_to_l_impl(f.right(), names));
    case K::disjunction: return disj(w_to_l_impl(f.left(), names), w_to_l_impl(f.right(), names));
    case K::exists:
      return Formula::exists(f.var(), conj(eq(l(var(f.var())), r(var(f.var()))), w_to_l_impl(f.body(), names)));
    default: break;
  }
  throw PreconditionError("translate_W_to_L: unexpected connective in unnested positive existential formula");
}

} // namespace detail

/// Existential L-formula agreeing with a positive existential W-formula on
/// finite arguments.
inline Formula translate_W_to_L(const Formula& f, NameSupply& names) {
  if (!is_positive_existential(f))
    throw FragmentError("translate_W_to_L: input is not positive existential: " + print(f));
  check_signature(f, Sig::W);
  Formula g = uniquify_bound(f);
  names.reserve(g);
  return detail::w_to_l_impl(unnest(g, names), names);
}

inline Formula translate_W_to_L(const Formula& f) {
  NameSupply names(all_names(f));
  return translate_W_to_L(f, names);
}

// ---------------------------------------------------------------------------
// L -> W

struct LtoWResult {
  Formula formula;
  std::map<std::string, CoordinatePair> pairs;  // every L-variable, free and bound
  std::map<std::string, std::string> origins;   // universally quantified helper -> source atom
};

namespace detail {

class LtoW {
public:
  explicit LtoW(NameSupply& names) : names_(names) {}

  const CoordinatePair& pair(const std::string& x) {
    auto it = pairs_.find(x);
    if (it == pairs_.end()) it = pairs_.emplace(x, CoordinatePair{names_.claim(x + "_l"), names_.claim(x + "_r")}).first;
    return it->second;
  }
  Term cl(const Term& v) { return dsl::var(pair(v.name()).left_var); }
  Term cr(const Term& v) { return dsl::var(pair(v.name()).right_var); }

  Formula go(const Formula& f, const std::set<std::string>& finite) {
    using K = Formula::Kind;
    using namespace dsl;
    switch (f.kind()) {
      case K::atom: return atom(f, finite);
      case K::negation: return neg(atom(f.child(), finite));
      case K::conjunction: {
        auto fin = with_facts(f, finite);
        return conj(go(f.left(), fin), go(f.right(), fin));
      }
      case K::disjunction: return disj(go(f.left(), finite), go(f.right(), finite));
      case K::exists: {
        auto fin = with_facts(f, finite);
        const auto& p = pair(f.var());
        Formula body = go(f.body(), fin);
        if (!defined_directly(f.var(), f.body())) body = conj(domain(p), body);
        return exists({p.left_var, p.right_var}, body);
      }
      case K::forall: {
        const auto& p = pair(f.var());
        const CoordinatePair copy = p;
        return forall(copy.left_var, forall(copy.right_var, implies(domain(copy), go(f.body(), finite))));
      }
      case K::implication: break;
    }
    throw PreconditionError("translate_L_to_W: implication survived NNF");
  }

  std::map<std::string, CoordinatePair> pairs() const { return pairs_; }
  std::map<std::string, std::string> origins() const { return origins_; }

private:
  Formula domain(const CoordinatePair& p) {
    using namespace dsl;
    return disj(delta_domain(var(p.left_var), var(p.right_var), names_),
                conj(eq(var(p.left_var), bot()), eq(var(p.right_var), bot())));
  }

  // Some conjunct equates x with a variable or with l, r, min, max, bot or cz
  // of variables; its translation then pins x's coordinates to those of a set.
  static bool defined_directly(const std::string& x, const Formula& body) {
    std::vector<Formula> cs;
    detail::conjuncts(body, cs);
    for (const auto& c : cs) {
      if (!c.is_atom()) continue;
      for (int flip = 0; flip < 2; ++flip) {
        const Term& v = flip ? c.lhs() : c.rhs();
        const Term& g = flip ? c.rhs() : c.lhs();
        if (!v.is_var() || v.name() != x || free_vars(g).count(x)) continue;
        if (g.is_var()) return true;
        switch (g.symbol()) {
          case Symbol::l:
          case Symbol::r:
          case Symbol::min:
          case Symbol::max:
          case Symbol::bot:
          case Symbol::cz: return true;
          default: break;
        }
      }
    }
    return false;
  }

  static void gather(const Formula& f, std::vector<Formula>& atoms) {
    using K = Formula::Kind;
    if (f.kind() == K::conjunction) {
      gather(f.left(), atoms);
      gather(f.right(), atoms);
    } else if (f.kind() == K::exists) {
      gather(f.body(), atoms);
    } else if (f.is_atom()) {
      atoms.push_back(f);
    }
  }

  // Variables that the positive atoms of the conjunctive group force to be finite.
  static std::set<std::string> with_facts(const Formula& f, std::set<std::string> finite) {
    std::vector<Formula> atoms;
    gather(f, atoms);
    std::map<std::string, std::set<std::string>> lv, rv;
    std::vector<std::pair<std::string, std::string>> eqs;
    for (const auto& a : atoms) {
      for (int flip = 0; flip < 2; ++flip) {
        const Term& g = flip ? a.rhs() : a.lhs();
        const Term& v = flip ? a.lhs() : a.rhs();
        if (!v.is_var()) continue;
        if (g.is_var()) {
          eqs.emplace_back(g.name(), v.name());
          continue;
        }
        switch (g.symbol()) {
          case Symbol::l:
          case Symbol::r:
            if (g.args()[0].is_var()) (g.symbol() == Symbol::l ? lv : rv)[g.args()[0].name()].insert(v.name());
            [[fallthrough]];
          case Symbol::min:
          case Symbol::max:
          case Symbol::bot:
          case Symbol::cz: finite.insert(v.name()); break;
          default: break;
        }
      }
    }
    for (const auto& [x, us] : lv) {
      auto it = rv.find(x);
      if (it == rv.end()) continue;
      for (const auto& u : us)
        if (it->second.count(u)) finite.insert(x);
    }
    for (bool changed = true; changed;) {
      changed = false;
      for (const auto& [a, b] : eqs) {
        if (finite.count(a) && finite.insert(b).second) changed = true;
        if (finite.count(b) && finite.insert(a).second) changed = true;
      }
    }
    return finite;
  }

  Formula sub_formula(const Term& x, const Term& y, const std::set<std::string>& finite, const std::string& origin) {
    using namespace dsl;
    // Below a finite set: x is finite and its points lie in y.
    if (finite.count(y.name())) return conj(eq(cl(x), cr(x)), sub(cl(x), cl(y)));
    Formula f = phi_subseteq(cl(x), cr(x), cl(y), cr(y), names_);
    origins_[f.var()] = origin;
    return f;
  }

  static void bound_vars(const Formula& f, std::vector<std::string>& out) {
    using K = Formula::Kind;
    switch (f.kind()) {
      case K::atom: return;
      case K::negation: bound_vars(f.child(), out); return;
      case K::exists:
      case K::forall:
        out.push_back(f.var());
        bound_vars(f.body(), out);
        return;
      default:
        bound_vars(f.left(), out);
        bound_vars(f.right(), out);
    }
  }

  Formula atom(const Formula& f, const std::set<std::string>& finite) {
    Formula out = atom_impl(f, finite);
    std::vector<std::string> vs;
    bound_vars(out, vs);
    for (const auto& v : vs) origins_.emplace(v, print(f));
    return out;
  }

  Formula atom_impl(const Formula& f, const std::set<std::string>& finite) {
    using namespace dsl;
    Term g = f.lhs(), v = f.rhs();
    if (g.is_var() && !v.is_var()) std::swap(g, v);
    if (g.is_var()) return conj(eq(cl(g), cl(v)), eq(cr(g), cr(v)));
    auto both = [&](const Term& t) { return conj(eq(cl(v), t), eq(cr(v), t)); };
    auto is_finite = [&](const Term& t) { return finite.count(t.name()) != 0; };
    switch (g.symbol()) {
      case Symbol::bot: return both(bot());
      case Symbol::cz: return both(cz());
      case Symbol::l: return both(cl(g.args()[0]));
      case Symbol::r: return both(cr(g.args()[0]));
      case Symbol::min: return both(min(cl(g.args()[0])));
      case Symbol::max: {
        const Term& x = g.args()[0];
        const Term d = cup(cl(x), cr(x));
        return disj(conj(sub(max(d), cr(x)), both(max(cr(x)))), conj(eq(cap(max(d), cr(x)), bot()), both(bot())));
      }
      case Symbol::cup:
      case Symbol::cap: {
        const Term& a = g.args()[0];
        const Term& b = g.args()[1];
        if (is_finite(a) && is_finite(b)) return both(Term::app(g.symbol(), {cl(a), cl(b)}));
        const std::string origin = print(f);
        if (g.symbol() == Symbol::cap && v == a) return sub_formula(a, b, finite, origin);
        if (g.symbol() == Symbol::cap && v == b) return sub_formula(b, a, finite, origin);
        if (g.symbol() == Symbol::cup && v == b) return sub_formula(a, b, finite, origin);
        if (g.symbol() == Symbol::cup && v == a) return sub_formula(b, a, finite, origin);
        // Pointwise graph: every singleton is in V iff it is in A (or, and) B.
        const std::string p = names_.fresh("P");
        origins_[p] = origin;
        const Term pt = var(p);
        const Formula in_v = phi_in(cl(v), cr(v), pt, names_);
        const Formula in_a = phi_in(cl(a), cr(a), pt, names_);
        const Formula in_b = phi_in(cl(b), cr(b), pt, names_);
        const Formula rhs = g.symbol() == Symbol::cup ? disj(in_a, in_b) : conj(in_a, in_b);
        // Endpoints of a union or intersection are endpoints of an argument.
        const Formula ends = conj(sub(cl(v), cup(cl(a), cl(b))), sub(cr(v), cup(cr(a), cr(b))));
        return conj(ends, forall(p, implies(at(pt), conj(implies(in_v, rhs), implies(rhs, in_v)))));
      }
      default: break;
    }
    throw PreconditionError("translate_L_to_W: symbol '" + std::string(symbol_name(g.symbol())) +
                            "' is not in signature L");
  }

  NameSupply& names_;
  std::map<std::string, CoordinatePair> pairs_;
  std::map<std::string, std::string> origins_;
};

} // namespace detail

/// W-formula over coordinate pairs agreeing with an L-formula under
/// A |-> (left endpoints, right endpoints).
inline LtoWResult translate_L_to_W_with_pairs(const Formula& f, NameSupply& names) {
  check_signature(f, Sig::L);
  Formula g = uniquify_bound(f);
  names.reserve(g);
  detail::LtoW t(names);
  for (const auto& v : free_vars(g)) t.pair(v);
  Formula out = simplify(t.go(unnest(g, names), {}));
  names.reserve(out);
  return {out, t.pairs(), t.origins()};
}

inline LtoWResult translate_L_to_W_with_pairs(const Formula& f) {
  NameSupply names(all_names(f));
  return translate_L_to_W_with_pairs(f, names);
}

inline Formula translate_L_to_W(const Formula& f) { return translate_L_to_W_with_pairs(f).formula; }

// ---------------------------------------------------------------------------
// Pipeline

/// An existential L-formula equivalent to `f`: translate to W over coordinate
/// pairs, make it positive existential, translate back to L, and read each
/// pair (X_l, X_r) as (l(X), r(X)). Inputs whose W-image keeps an essential
/// universal quantifier are rejected with a FragmentError.
inline Formula pipeline(const Formula& f) {
  NameSupply names(all_names(f));
  const LtoWResult w = translate_L_to_W_with_pairs(f, names);
  Formula pe = dsl::truth();
  try {
    pe = to_positive_existential(w.formula, names);
  } catch (const FragmentError& e) {
    std::string source;
    for (const auto& [x, p] : w.pairs)
      if (p.left_var == e.var() || p.right_var == e.var()) source = "quantifier over " + x;
    if (auto it = w.origins.find(e.var()); it != w.origins.end()) source = "atom " + it->second;
    throw FragmentError("pipeline: universal quantifier over " + e.var() + " survives translation" +
                            (source.empty() ? std::string() : " (from " + source + ")"),
                        e.var());
  }
  Formula theta = translate_W_to_L(pe, names);
  std::map<std::string, Term> back;
  for (const auto& x : free_vars(f)) {
    const auto& p = w.pairs.at(x);
    back.emplace(p.left_var, dsl::l(dsl::var(x)));
    back.emplace(p.right_var, dsl::r(dsl::var(x)));
  }
  return simplify(substitute(theta, back));
}

} // namespace mclat

#endif // MCLAT_TRANSFORMS_HPP
