#ifndef MCLAT_SEMANTICS_HPP
#define MCLAT_SEMANTICS_HPP

#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "fci.hpp"
#include "finset.hpp"
#include "syntax.hpp"

namespace mclat {

/// Unbound variables, signature mismatches at evaluation time, and search
/// spaces beyond the enumeration cap.
class EvalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Largest number of free points a subset enumeration may range over.
inline constexpr std::size_t kEnumerationCap = 12;

/// Bounds quantifier search. W-quantifiers range over subsets of `points`;
/// L-quantifiers over normalized sets with endpoints in `points`, at most
/// `max_segments` bounded components, and a ray only if `allow_ray`.
struct WitnessPool {
  FinSet points;
  std::size_t max_segments = 0;
  bool allow_ray = true;

  void validate() const {
    if (points.empty() || !points.contains(zero()))
      throw PreconditionError("WitnessPool: points must be nonempty and contain 0");
  }

  bool admits(const FinSet& s) const { return is_subset(s, points); }
  bool admits(const FciSet& s) const {
    if (s.ray() && (!allow_ray || !points.contains(*s.ray()))) return false;
    if (s.segments().size() > max_segments) return false;
    for (const auto& seg : s.segments())
      if (!points.contains(seg.lo) || !points.contains(seg.hi)) return false;
    return true;
  }
};

template <class Elem>
using Assignment = std::map<std::string, Elem>;
using WAssignment = Assignment<FinSet>;
using LAssignment = Assignment<FciSet>;

inline FinSet boundary_points(const FinSet& s) { return s; }
inline FinSet boundary_points(const FciSet& s) { return boundary(s); }

/// `points` with 0, the midpoint of each pair of consecutive points, and one
/// point above the largest.
inline FinSet refine(const FinSet& points) {
  const FinSet collected = set_union(points, cz_set());
  std::vector<Point> pts(collected.begin(), collected.end());
  for (std::size_t i = 0; i + 1 < collected.size(); ++i) pts.push_back(midpoint(collected[i], collected[i + 1]));
  pts.push_back(above(collected[collected.size() - 1]));
  return FinSet(std::move(pts));
}

/// The refinement of every boundary point of the assigned values, with no
/// effective limit on segments.
template <class Elem>
WitnessPool default_pool(const Assignment<Elem>& a) {
  FinSet collected;
  for (const auto& [name, v] : a) collected = set_union(collected, boundary_points(v));
  WitnessPool p{refine(collected), 0, true};
  p.max_segments = p.points.size();
  return p;
}

/// Calls `fn` on every normalized set with endpoints in `points`, at most
/// `max_segments` bounded components and optionally one ray, until `fn`
/// returns true. Returns whether it stopped early.
inline bool for_each_fci(const FinSet& points, std::size_t max_segments, bool allow_ray,
                         const std::function<bool(const FciSet&)>& fn) {
  const auto pts = points.points();
  const std::size_t n = pts.size();
  std::vector<Component> comps;
  std::function<bool(std::size_t)> rec = [&](std::size_t from) -> bool {
    if (fn(normalize(comps))) return true;
    for (std::size_t s = from; s < n; ++s) {
      if (comps.size() < max_segments) {
        for (std::size_t e = s; e < n; ++e) {
          comps.push_back(Component::segment(pts[s], pts[e]));
          const bool stop = rec(e + 1);
          comps.pop_back();
          if (stop) return true;
        }
      }
      if (allow_ray) {
        comps.push_back(Component::ray(pts[s]));
        const bool stop = fn(normalize(comps));
        comps.pop_back();
        if (stop) return true;
      }
    }
    return false;
  };
  return rec(0);
}

/// Interpretation of the W signature (plus relative complement) on finite sets.
struct WStructure {
  using Element = FinSet;
  static constexpr Sig sig = Sig::W;

  static Element constant(Symbol s) { return s == Symbol::cz ? cz_set() : FinSet{}; }
  static Element apply1(Symbol s, const Element& a) {
    switch (s) {
      case Symbol::min: return min_s(a);
      case Symbol::max: return max_s(a);
      default: throw EvalError("symbol '" + std::string(symbol_name(s)) + "' has no interpretation on finite sets");
    }
  }
  static Element apply2(Symbol s, const Element& a, const Element& b) {
    switch (s) {
      case Symbol::cup: return set_union(a, b);
      case Symbol::cap: return set_intersect(a, b);
      case Symbol::ips: return ips(a, b);
      case Symbol::diff: return rel_complement(a, b);
      default: throw EvalError("symbol '" + std::string(symbol_name(s)) + "' has no interpretation on finite sets");
    }
  }
};

/// Interpretation of the L signature on finite unions of closed intervals.
struct LStructure {
  using Element = FciSet;
  static constexpr Sig sig = Sig::L;

  static Element constant(Symbol s) { return s == Symbol::cz ? singleton_f(zero()) : FciSet{}; }
  static Element apply1(Symbol s, const Element& a) {
    switch (s) {
      case Symbol::min: return min_f(a);
      case Symbol::max: return max_f(a);
      case Symbol::l: return embed_finset(left_pts(a));
      case Symbol::r: return embed_finset(right_pts(a));
      default: throw EvalError("symbol '" + std::string(symbol_name(s)) + "' has no interpretation on interval sets");
    }
  }
  static Element apply2(Symbol s, const Element& a, const Element& b) {
    switch (s) {
      case Symbol::cup: return union_f(a, b);
      case Symbol::cap: return intersect_f(a, b);
      default: throw EvalError("symbol '" + std::string(symbol_name(s)) + "' has no interpretation on interval sets");
    }
  }
};

namespace detail {

struct CTerm {
  int slot = -1;  // >= 0 for variables
  Symbol sym = Symbol::bot;
  std::vector<CTerm> args;

  bool is_var() const { return slot >= 0; }
  bool is_app(Symbol s) const { return slot < 0 && sym == s; }
  bool mentions(int v) const {
    if (slot == v) return true;
    for (const auto& a : args)
      if (a.mentions(v)) return true;
    return false;
  }
  void slots(std::vector<int>& out) const {
    if (slot >= 0) out.push_back(slot);
    for (const auto& a : args) a.slots(out);
  }
};

// Shapes of conjuncts that bound the value of one block variable X.
enum class PatternKind {
  exact,     // X = t
  upper,     // cap(X,t) = X: X within t
  cup_bound, // cup(s,X) = t: t \ s within X within t
  disjoint,  // cap(X,s) = bot
  small,     // min(X) = X or max(X) = X: X empty or a singleton
  finite,    // l(X) = r(X)
  left,      // l(X) = t
  right,     // r(X) = t
};

struct Pattern {
  PatternKind kind;
  const CTerm* t = nullptr;
  const CTerm* s = nullptr;
  std::uint64_t needs = 0;  // other block variables that t and s read
};

struct CNode {
  enum class Kind { atom, negation, conjunction, disjunction, block } kind = Kind::atom;
  CTerm lhs, rhs;
  std::vector<CNode> kids;
  // block
  std::vector<int> vars;
  std::vector<std::string> names;
  std::vector<std::uint64_t> masks;                // per conjunct (kids)
  std::vector<std::vector<int>> conjuncts_of_var;  // per block variable
  std::vector<int> closed_conjuncts;               // mention no block variable
  std::vector<std::vector<Pattern>> patterns;      // per block variable

  void slots(std::vector<int>& out) const {
    if (kind == Kind::atom) {
      lhs.slots(out);
      rhs.slots(out);
    }
    for (const auto& k : kids) k.slots(out);
  }
};

inline constexpr std::size_t kMaxBlockVars = 64;

class Compiler {
public:
  explicit Compiler(Sig sig) : sig_(sig) {}

  int bind_free(const std::string& name) {
    const int slot = slot_count_++;
    scope_[name].push_back(slot);
    return slot;
  }
  int slot_count() const { return slot_count_; }

  CNode compile(const Formula& f) { return node(nnf(f)); }

  CTerm term(const Term& t) {
    CTerm out;
    if (t.is_var()) {
      auto it = scope_.find(t.name());
      if (it == scope_.end() || it->second.empty()) throw EvalError("unbound variable " + t.name());
      out.slot = it->second.back();
      return out;
    }
    if (t.symbol() != Symbol::diff && !in_signature(t.symbol(), sig_))
      throw EvalError("symbol '" + std::string(symbol_name(t.symbol())) + "' is not in signature " +
                      std::string(sig_name(sig_)));
    out.sym = t.symbol();
    for (const auto& a : t.args()) out.args.push_back(term(a));
    return out;
  }

private:
  // Input is in NNF.
  CNode node(const Formula& f) {
    using K = Formula::Kind;
    CNode out;
    switch (f.kind()) {
      case K::atom:
        out.kind = CNode::Kind::atom;
        out.lhs = term(f.lhs());
        out.rhs = term(f.rhs());
        return out;
      case K::negation:
        out.kind = CNode::Kind::negation;
        out.kids.push_back(node(f.child()));
        return out;
      case K::conjunction:
      case K::disjunction: {
        out.kind = f.kind() == K::conjunction ? CNode::Kind::conjunction : CNode::Kind::disjunction;
        flatten_same(f, f.kind(), out.kids);
        return out;
      }
      case K::exists: return block(f);
      case K::forall: {
        // A x. phi  ==  !(E x. !phi)
        out.kind = CNode::Kind::negation;
        out.kids.push_back(block(Formula::exists(f.var(), nnf(Formula::negation(f.body())))));
        return out;
      }
      case K::implication: break;
    }
    throw PreconditionError("compile: implication survived NNF");
  }

  void flatten_same(const Formula& f, Formula::Kind k, std::vector<CNode>& out) {
    if (f.kind() == k) {
      flatten_same(f.left(), k, out);
      flatten_same(f.right(), k, out);
    } else {
      out.push_back(node(f));
    }
  }

  // Gathers a maximal run of existentials separated only by conjunctions.
  void gather(const Formula& f, CNode& blk, std::vector<std::string>& pushed) {
    using K = Formula::Kind;
    if (f.kind() == K::conjunction) {
      gather(f.left(), blk, pushed);
      gather(f.right(), blk, pushed);
      return;
    }
    if (f.kind() == K::exists && blk.vars.size() < kMaxBlockVars) {
      const int slot = slot_count_++;
      scope_[f.var()].push_back(slot);
      pushed.push_back(f.var());
      blk.vars.push_back(slot);
      blk.names.push_back(f.var());
      gather(f.body(), blk, pushed);
      scope_[f.var()].pop_back();
      pushed.pop_back();
      return;
    }
    blk.kids.push_back(node(f));
  }

  CNode block(const Formula& f) {
    CNode blk;
    blk.kind = CNode::Kind::block;
    std::vector<std::string> pushed;
    gather(f, blk, pushed);
    const std::size_t nv = blk.vars.size();
    auto local = [&](int slot) -> int {
      for (std::size_t i = 0; i < nv; ++i)
        if (blk.vars[i] == slot) return static_cast<int>(i);
      return -1;
    };
    auto mask_of = [&](auto const& thing) {
      std::vector<int> s;
      thing.slots(s);
      std::uint64_t m = 0;
      for (int x : s)
        if (int i = local(x); i >= 0) m |= std::uint64_t{1} << i;
      return m;
    };
    blk.conjuncts_of_var.assign(nv, {});
    blk.patterns.assign(nv, {});
    for (std::size_t c = 0; c < blk.kids.size(); ++c) {
      const std::uint64_t m = mask_of(blk.kids[c]);
      blk.masks.push_back(m);
      if (m == 0) blk.closed_conjuncts.push_back(static_cast<int>(c));
      for (std::size_t v = 0; v < nv; ++v)
        if (m >> v & 1) blk.conjuncts_of_var[v].push_back(static_cast<int>(c));
    }
    for (std::size_t c = 0; c < blk.kids.size(); ++c) {
      const CNode& k = blk.kids[c];
      if (k.kind != CNode::Kind::atom) continue;
      for (std::size_t v = 0; v < nv; ++v)
        if (blk.masks[c] >> v & 1) find_patterns(k, blk.vars[v], blk.patterns[v], mask_of);
    }
    return blk;
  }

  template <class MaskOf>
  void find_patterns(const CNode& atom, int x, std::vector<Pattern>& out, MaskOf&& mask_of) {
    auto add = [&](PatternKind kind, const CTerm* t, const CTerm* s = nullptr) {
      Pattern p{kind, t, s, 0};
      if (t) p.needs |= mask_of(*t);
      if (s) p.needs |= mask_of(*s);
      out.push_back(p);
    };
    for (int flip = 0; flip < 2; ++flip) {
      const CTerm& a = flip ? atom.rhs : atom.lhs;
      const CTerm& b = flip ? atom.lhs : atom.rhs;
      if (a.slot == x && !b.mentions(x)) add(PatternKind::exact, &b);
      // cap(X,t) = X
      if (b.slot == x && a.is_app(Symbol::cap)) {
        for (int i = 0; i < 2; ++i)
          if (a.args[i].slot == x && !a.args[1 - i].mentions(x)) add(PatternKind::upper, &a.args[1 - i]);
      }
      // cup(s,X) = t
      if (a.is_app(Symbol::cup) && !b.mentions(x)) {
        for (int i = 0; i < 2; ++i)
          if (a.args[i].slot == x && !a.args[1 - i].mentions(x)) add(PatternKind::cup_bound, &b, &a.args[1 - i]);
      }
      // cap(X,s) = bot
      if (a.is_app(Symbol::cap) && b.is_app(Symbol::bot)) {
        for (int i = 0; i < 2; ++i)
          if (a.args[i].slot == x && !a.args[1 - i].mentions(x)) add(PatternKind::disjoint, &a.args[1 - i]);
      }
      if (b.slot == x && (a.is_app(Symbol::min) || a.is_app(Symbol::max)) && a.args[0].slot == x)
        add(PatternKind::small, nullptr);
      if (a.is_app(Symbol::l) && a.args[0].slot == x) {
        if (b.is_app(Symbol::r) && b.args[0].slot == x)
          add(PatternKind::finite, nullptr);
        else if (!b.mentions(x))
          add(PatternKind::left, &b);
      }
      if (a.is_app(Symbol::r) && a.args[0].slot == x && !b.mentions(x)) add(PatternKind::right, &b);
    }
  }

  Sig sig_;
  int slot_count_ = 0;
  std::map<std::string, std::vector<int>> scope_;
};

} // namespace detail

/// Compiles a formula once and evaluates it under many assignments.
/// Quantifier runs separated only by conjunctions are solved as one block:
/// variables are chosen most-constrained first, candidates come from the
/// conjuncts that bound them (equations, subset bounds, endpoint equations,
/// finiteness), and each conjunct is checked as soon as its variables are
/// set. Candidate sets always contain every satisfying pool element, so the
/// result is exactly the pool-relativized truth value.
template <class S>
class BoundedEvaluator {
public:
  using Elem = typename S::Element;

  BoundedEvaluator(const Formula& f, std::vector<std::string> free_order) : free_(std::move(free_order)) {
    detail::Compiler c(S::sig);
    for (const auto& v : free_) c.bind_free(v);
    root_ = c.compile(f);
    slots_ = c.slot_count();
  }

  explicit BoundedEvaluator(const Formula& f) : BoundedEvaluator(f, sorted(free_vars(f))) {}

  const std::vector<std::string>& free_order() const { return free_; }

  bool operator()(const Assignment<Elem>& a, const WitnessPool& pool) {
    pool.validate();
    pool_ = &pool;
    full_count_.reset();
    env_.assign(static_cast<std::size_t>(slots_), Elem{});
    for (std::size_t i = 0; i < free_.size(); ++i) {
      auto it = a.find(free_[i]);
      if (it == a.end()) throw EvalError("unbound variable " + free_[i]);
      env_[i] = it->second;
    }
    return eval(root_);
  }

private:
  static std::vector<std::string> sorted(const std::set<std::string>& s) { return {s.begin(), s.end()}; }

  const Elem& ref(const detail::CTerm& t, Elem& tmp) {
    if (t.slot >= 0) return env_[static_cast<std::size_t>(t.slot)];
    switch (t.args.size()) {
      case 0: tmp = S::constant(t.sym); break;
      case 1: {
        Elem a;
        tmp = S::apply1(t.sym, ref(t.args[0], a));
        break;
      }
      default: {
        Elem a, b;
        const Elem& x = ref(t.args[0], a);
        const Elem& y = ref(t.args[1], b);
        tmp = S::apply2(t.sym, x, y);
      }
    }
    return tmp;
  }
  Elem value(const detail::CTerm& t) {
    Elem tmp;
    return ref(t, tmp);
  }

  bool eval(const detail::CNode& n) {
    using K = detail::CNode::Kind;
    switch (n.kind) {
      case K::atom: {
        Elem a, b;
        return ref(n.lhs, a) == ref(n.rhs, b);
      }
      case K::negation: return !eval(n.kids[0]);
      case K::conjunction:
        for (const auto& k : n.kids)
          if (!eval(k)) return false;
        return true;
      case K::disjunction:
        for (const auto& k : n.kids)
          if (eval(k)) return true;
        return false;
      case K::block:
        for (int c : n.closed_conjuncts)
          if (!eval(n.kids[static_cast<std::size_t>(c)])) return false;
        return solve(n, 0);
    }
    return false;
  }

  // Candidate plan for one block variable.
  struct Plan {
    enum class Kind { none, single, subsets, small, fci_left, fci_right, full } kind = Kind::none;
    double count = 0;
    Elem single;
    FinSet lower;
    FinSet free;                   // points that may be added to `lower`
    FinSet endpoints;              // fci_left / fci_right
  };

  double full_count() {
    if (!full_count_) {
      if constexpr (S::sig == Sig::W) {
        full_count_ = std::ldexp(1.0, static_cast<int>(pool_->points.size()));
      } else {
        // Upper estimate ignoring the segment cap.
        const std::size_t n = pool_->points.size();
        std::vector<double> from(n + 2, 0.0);
        from[n] = 1;
        for (std::size_t i = n; i-- > 0;) {
          double v = 2 * from[i + 1] + (pool_->allow_ray ? 1 : 0);
          for (std::size_t e = i + 1; e < n; ++e) v += from[e + 1];
          from[i] = v;
        }
        full_count_ = from[0];
      }
    }
    return *full_count_;
  }

  Plan plan_for(const detail::CNode& blk, std::size_t v, std::uint64_t assigned) {
    using detail::PatternKind;
    const FinSet& pts = pool_->points;
    Plan p;
    bool bounded = false, small = false, finite = false;
    std::optional<FinSet> left, right;
    std::vector<const detail::Pattern*> bounds;
    for (const auto& pat : blk.patterns[v]) {
      if ((pat.needs & ~assigned) != 0) continue;
      switch (pat.kind) {
        case PatternKind::exact:
          p.kind = Plan::Kind::single;
          p.single = value(*pat.t);
          p.count = 1;
          return p;
        case PatternKind::small: small = true; break;
        case PatternKind::finite: finite = true; break;
        case PatternKind::left:
        case PatternKind::right:
          if constexpr (S::sig == Sig::L) {
            const FciSet t = value(*pat.t);
            if (!is_finite_set(t)) {
              p.kind = Plan::Kind::none;
              p.count = 0;
              return p;
            }
            (pat.kind == PatternKind::left ? left : right) = as_finset(t);
          }
          break;
        default: bounds.push_back(&pat); break;
      }
    }
    if constexpr (S::sig == Sig::L) {
      if (left && right) {
        p.count = 1;
        try {
          p.single = build_from_endpoints(*left, *right);
          p.kind = Plan::Kind::single;
        } catch (const PreconditionError&) {
          p.kind = Plan::Kind::none;
          p.count = 0;
        }
        return p;
      }
    }
    // Point-set bounds (finite mode).
    FinSet upper = pts, lower, excluded;
    for (const auto* pat : bounds) {
      const Elem t = value(*pat->t);
      if constexpr (S::sig == Sig::W) {
        if (pat->kind == detail::PatternKind::disjoint) {
          excluded = set_union(excluded, t);
        } else {
          upper = set_intersect(upper, t);
          bounded = true;
          if (pat->kind == detail::PatternKind::cup_bound) lower = set_union(lower, rel_complement(t, value(*pat->s)));
        }
      } else {
        auto filter = [&](auto&& keep) {
          std::vector<Point> out;
          for (const auto& q : pts)
            if (keep(q)) out.push_back(q);
          return FinSet::from_sorted(std::move(out));
        };
        if (pat->kind == detail::PatternKind::disjoint) {
          excluded = set_union(excluded, filter([&](const Point& q) { return contains(t, q); }));
        } else {
          if (is_finite_set(t)) bounded = true;
          upper = set_intersect(upper, filter([&](const Point& q) { return contains(t, q); }));
          if (pat->kind == detail::PatternKind::cup_bound) {
            const Elem s = value(*pat->s);
            lower = set_union(lower, filter([&](const Point& q) { return contains(t, q) && !contains(s, q); }));
          }
        }
      }
    }
    bool point_mode = true;
    if constexpr (S::sig == Sig::L) point_mode = finite || small || bounded;
    if (point_mode) {
      upper = rel_complement(upper, excluded);
      if (!is_subset(lower, upper)) {
        p.kind = Plan::Kind::none;
        p.count = 0;
        return p;
      }
      p.lower = lower;
      p.free = rel_complement(upper, lower);
      if (small) {
        p.kind = Plan::Kind::small;
        p.count = lower.empty() ? static_cast<double>(p.free.size() + 1) : (lower.size() == 1 ? 1 : 0);
      } else {
        p.kind = Plan::Kind::subsets;
        p.count = std::ldexp(1.0, static_cast<int>(p.free.size()));
      }
      return p;
    }
    if constexpr (S::sig == Sig::L) {
      if (left || right) {
        p.kind = left ? Plan::Kind::fci_left : Plan::Kind::fci_right;
        p.endpoints = left ? *left : *right;
        p.count = endpoint_count(p.kind == Plan::Kind::fci_left, p.endpoints);
        return p;
      }
    }
    p.kind = Plan::Kind::full;
    p.count = full_count();
    return p;
  }

  // Points of the pool strictly after `lo` (or from the start) up to `hi` inclusive (or to the end).
  std::vector<Point> pool_range(const std::optional<Point>& lo, bool lo_inclusive, const std::optional<Point>& hi,
                                bool hi_inclusive) const {
    std::vector<Point> out;
    for (const auto& q : pool_->points) {
      if (lo && (lo_inclusive ? q < *lo : q <= *lo)) continue;
      if (hi && (hi_inclusive ? q > *hi : q >= *hi)) continue;
      out.push_back(q);
    }
    return out;
  }

  double endpoint_count(bool given_left, const FinSet& e) const {
    double c = 1;
    const std::size_t k = e.size();
    if (given_left) {
      for (std::size_t i = 0; i < k; ++i) {
        std::optional<Point> next = i + 1 < k ? std::optional<Point>(e[i + 1]) : std::nullopt;
        double options = static_cast<double>(pool_range(e[i], true, next, false).size());
        if (i + 1 == k && pool_->allow_ray) options += 1;
        c *= options;
      }
    } else {
      for (std::size_t i = 0; i < k; ++i) {
        std::optional<Point> prev = i ? std::optional<Point>(e[i - 1]) : std::nullopt;
        c *= static_cast<double>(pool_range(prev, false, e[i], true).size());
      }
      if (pool_->allow_ray) {
        std::optional<Point> last = k ? std::optional<Point>(e[k - 1]) : std::nullopt;
        c *= 1 + static_cast<double>(pool_range(last, false, std::nullopt, true).size());
      }
    }
    return c;
  }

  // Enumerates sets with the given left (or right) endpoints.
  bool for_each_with_endpoints(bool given_left, const FinSet& e, const std::function<bool(const FciSet&)>& fn) {
    const std::size_t k = e.size();
    std::vector<Component> comps;
    std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
      if (given_left) {
        if (i == k) return fn(normalize(comps));
        std::optional<Point> next = i + 1 < k ? std::optional<Point>(e[i + 1]) : std::nullopt;
        for (const auto& hi : pool_range(e[i], true, next, false)) {
          comps.push_back(Component::segment(e[i], hi));
          const bool stop = rec(i + 1);
          comps.pop_back();
          if (stop) return true;
        }
        if (i + 1 == k && pool_->allow_ray) {
          comps.push_back(Component::ray(e[i]));
          const bool stop = fn(normalize(comps));
          comps.pop_back();
          if (stop) return true;
        }
        return false;
      }
      if (i == k) {
        if (fn(normalize(comps))) return true;
        if (!pool_->allow_ray) return false;
        std::optional<Point> last = k ? std::optional<Point>(e[k - 1]) : std::nullopt;
        for (const auto& lo : pool_range(last, false, std::nullopt, true)) {
          comps.push_back(Component::ray(lo));
          const bool stop = fn(normalize(comps));
          comps.pop_back();
          if (stop) return true;
        }
        return false;
      }
      std::optional<Point> prev = i ? std::optional<Point>(e[i - 1]) : std::nullopt;
      for (const auto& lo : pool_range(prev, false, e[i], true)) {
        comps.push_back(Component::segment(lo, e[i]));
        const bool stop = rec(i + 1);
        comps.pop_back();
        if (stop) return true;
      }
      return false;
    };
    return rec(0);
  }

  void check_cap(std::size_t n) const {
    if (n > kEnumerationCap)
      throw EvalError("quantifier search for " + *searching_ + " over " + std::to_string(n) +
                      " free points exceeds the cap of " + std::to_string(kEnumerationCap));
  }

  Elem from_points(const FinSet& s) const {
    if constexpr (S::sig == Sig::W)
      return s;
    else
      return embed_finset(s);
  }

  bool for_each_candidate(Plan& p, const std::function<bool(const Elem&)>& fn) {
    switch (p.kind) {
      case Plan::Kind::none: return false;
      case Plan::Kind::single: return fn(p.single);
      case Plan::Kind::small: {
        if (!p.lower.empty()) return fn(from_points(p.lower));
        if (fn(from_points(FinSet{}))) return true;
        for (const auto& q : p.free)
          if (fn(from_points(FinSet::singleton(q)))) return true;
        return false;
      }
      case Plan::Kind::subsets: {
        check_cap(p.free.size());
        const std::size_t n = p.free.size();
        for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
          std::vector<Point> pts(p.lower.begin(), p.lower.end());
          for (std::size_t i = 0; i < n; ++i)
            if (bits >> i & 1) pts.push_back(p.free[i]);
          if (fn(from_points(FinSet(std::move(pts))))) return true;
        }
        return false;
      }
      case Plan::Kind::fci_left:
      case Plan::Kind::fci_right:
        if constexpr (S::sig == Sig::L)
          return for_each_with_endpoints(p.kind == Plan::Kind::fci_left, p.endpoints,
                                         [&](const FciSet& s) { return fn(s); });
        return false;
      case Plan::Kind::full:
        check_cap(pool_->points.size());
        if constexpr (S::sig == Sig::L)
          return for_each_fci(pool_->points, pool_->max_segments, pool_->allow_ray,
                              [&](const FciSet& s) { return fn(s); });
        else {
          Plan q;
          q.kind = Plan::Kind::subsets;
          q.free = pool_->points;
          return for_each_candidate(q, fn);
        }
    }
    return false;
  }

  bool solve(const detail::CNode& blk, std::uint64_t assigned) {
    const std::size_t nv = blk.vars.size();
    if (assigned == (nv == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << nv) - 1)) return true;
    std::optional<Plan> best;
    std::size_t best_v = 0;
    for (std::size_t v = 0; v < nv; ++v) {
      if (assigned >> v & 1) continue;
      Plan p = plan_for(blk, v, assigned);
      if (!best || p.count < best->count) {
        best = std::move(p);
        best_v = v;
      }
      if (best->count <= 1) break;
    }
    const std::uint64_t now = assigned | (std::uint64_t{1} << best_v);
    searching_ = &blk.names[best_v];
    const auto slot = static_cast<std::size_t>(blk.vars[best_v]);
    return for_each_candidate(*best, [&](const Elem& cand) {
      if (!pool_->admits(cand)) return false;
      env_[slot] = cand;
      for (int c : blk.conjuncts_of_var[best_v]) {
        const auto uc = static_cast<std::size_t>(c);
        if ((blk.masks[uc] & ~now) == 0 && !eval(blk.kids[uc])) return false;
      }
      return solve(blk, now);
    });
  }

  std::vector<std::string> free_;
  detail::CNode root_;
  int slots_ = 0;
  std::vector<Elem> env_;
  const WitnessPool* pool_ = nullptr;
  std::optional<double> full_count_;
  const std::string* searching_ = nullptr;
};

using WEvaluator = BoundedEvaluator<WStructure>;
using LEvaluator = BoundedEvaluator<LStructure>;

/// Pool-bounded satisfaction in the finite-set structure.
inline bool eval_bounded(const Formula& f, const WAssignment& a, const WitnessPool& p) {
  return WEvaluator(f)(a, p);
}

/// Pool-bounded satisfaction in the interval structure.
inline bool eval_bounded(const Formula& f, const LAssignment& a, const WitnessPool& p) {
  return LEvaluator(f)(a, p);
}

template <class Elem>
bool eval_qf(const Formula& f, const Assignment<Elem>& a) {
  if (!is_quantifier_free(f)) throw PreconditionError("eval_qf: formula has quantifiers: " + print(f));
  return eval_bounded(f, a, default_pool(a));
}

namespace detail {

template <class S>
typename S::Element eval_term_in(const Term& t, const Assignment<typename S::Element>& a) {
  if (t.is_var()) {
    auto it = a.find(t.name());
    if (it == a.end()) throw EvalError("unbound variable " + t.name());
    return it->second;
  }
  if (t.symbol() != Symbol::diff && !in_signature(t.symbol(), S::sig))
    throw EvalError("symbol '" + std::string(symbol_name(t.symbol())) + "' is not in signature " +
                    std::string(sig_name(S::sig)));
  switch (t.args().size()) {
    case 0: return S::constant(t.symbol());
    case 1: return S::apply1(t.symbol(), eval_term_in<S>(t.args()[0], a));
    default: return S::apply2(t.symbol(), eval_term_in<S>(t.args()[0], a), eval_term_in<S>(t.args()[1], a));
  }
}

} // namespace detail

inline FinSet eval_term(const Term& t, const WAssignment& a) { return detail::eval_term_in<WStructure>(t, a); }
inline FciSet eval_term(const Term& t, const LAssignment& a) { return detail::eval_term_in<LStructure>(t, a); }

} // namespace mclat

#endif // MCLAT_SEMANTICS_HPP
