#ifndef MCLAT_ORACLE_HPP
#define MCLAT_ORACLE_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "fci.hpp"
#include "finset.hpp"
#include "semantics.hpp"
#include "syntax.hpp"

namespace mclat {

inline constexpr std::size_t kFciEnumerationCap = 8;

/// Every subset of `pool`, in binary counting order (bit i selects pool[i]).
inline std::vector<FinSet> enum_finsets(const FinSet& pool) {
  if (pool.size() > kEnumerationCap)
    throw PreconditionError("enum_finsets: pool of " + std::to_string(pool.size()) + " points exceeds the cap of " +
                            std::to_string(kEnumerationCap));
  std::vector<FinSet> out;
  const std::size_t n = pool.size();
  out.reserve(std::size_t{1} << n);
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
    std::vector<Point> pts;
    for (std::size_t i = 0; i < n; ++i)
      if (bits >> i & 1) pts.push_back(pool[i]);
    out.push_back(FinSet::from_sorted(std::move(pts)));
  }
  return out;
}

namespace detail {

inline std::vector<FciSet> enum_fcis_uncapped(const FinSet& pool, std::size_t max_segments, bool allow_ray) {
  std::vector<FciSet> out;
  for_each_fci(pool, max_segments, allow_ray, [&](const FciSet& s) {
    out.push_back(s);
    return false;
  });
  return out;
}

} // namespace detail

/// Every normalized interval set with endpoints in `pool`, at most
/// `max_segments` bounded components, and a ray if `allow_ray`.
inline std::vector<FciSet> enum_fcis(const FinSet& pool, std::size_t max_segments, bool allow_ray) {
  if (pool.size() > kFciEnumerationCap)
    throw PreconditionError("enum_fcis: pool of " + std::to_string(pool.size()) + " points exceeds the cap of " +
                            std::to_string(kFciEnumerationCap));
  return detail::enum_fcis_uncapped(pool, max_segments, allow_ray);
}

/// The first `n` of 0, 1, 2, 5/2, 4, 9/2, 6, 13/2, 8, ...: gaps of both
/// widths, so pools exercise dense and sparse neighbourhoods.
inline FinSet standard_pool(std::size_t n) {
  std::vector<Point> pts;
  for (std::int64_t k = 0; pts.size() < n; ++k) {
    if (k < 3) {
      pts.emplace_back(k);
      continue;
    }
    const std::int64_t m = (k - 3) / 2 + 1;
    pts.push_back((k - 3) % 2 == 0 ? Point(4 * m + 1, 2) : Point(2 * m + 2));
  }
  return FinSet(std::move(pts));
}

// ---------------------------------------------------------------------------
// Random generation

/// `n` distinct rationals in [0, 10] with denominators up to 4.
inline FinSet random_points(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<std::int64_t> den(1, 4);
  std::vector<Point> pts;
  FinSet out;
  while (out.size() < n) {
    const std::int64_t d = den(rng);
    std::uniform_int_distribution<std::int64_t> num(0, 10 * d);
    pts.emplace_back(num(rng), d);
    out = FinSet(pts);
  }
  return out;
}

/// A random subset of `pool`.
inline FinSet random_finset(std::mt19937_64& rng, const FinSet& pool) {
  std::bernoulli_distribution coin(0.5);
  std::vector<Point> pts;
  for (const auto& p : pool)
    if (coin(rng)) pts.push_back(p);
  return FinSet::from_sorted(std::move(pts));
}

/// A random interval set over `pool`: each point, each gap between
/// consecutive chosen points, and the tail are included independently.
inline FciSet random_fci(std::mt19937_64& rng, const FinSet& pool, std::size_t max_segments, bool allow_ray) {
  std::bernoulli_distribution coin(0.5);
  const std::size_t n = pool.size();
  for (;;) {
    std::vector<bool> in(n), gap(n);
    for (std::size_t i = 0; i < n; ++i) in[i] = coin(rng);
    for (std::size_t i = 0; i + 1 < n; ++i) gap[i] = in[i] && in[i + 1] && coin(rng);
    const bool tail = allow_ray && n > 0 && in[n - 1] && coin(rng);
    std::vector<Component> comps;
    std::optional<Point> start;
    for (std::size_t i = 0; i < n; ++i) {
      if (!in[i]) continue;
      if (!start) start = pool[i];
      if (i + 1 < n && gap[i]) continue;
      comps.push_back(i + 1 == n && tail ? Component::ray(*start) : Component::segment(*start, pool[i]));
      start.reset();
    }
    FciSet s = normalize(std::move(comps));
    if (s.segments().size() <= max_segments) return s;
  }
}

/// A random term of the given depth over `vars` and the symbols of `sig`.
inline Term random_term(std::mt19937_64& rng, Sig sig, const std::vector<std::string>& vars, int depth) {
  std::vector<Symbol> syms;
  for (Symbol s : {Symbol::cup, Symbol::cap, Symbol::bot, Symbol::cz, Symbol::min, Symbol::max, Symbol::ips,
                   Symbol::l, Symbol::r})
    if (in_signature(s, sig)) syms.push_back(s);
  std::uniform_int_distribution<std::size_t> pick_var(0, vars.size() - 1), pick_sym(0, syms.size() - 1);
  std::bernoulli_distribution leaf_is_var(0.8), stop(0.3);
  if (depth == 0 || stop(rng)) {
    if (leaf_is_var(rng)) return Term::var(vars[pick_var(rng)]);
    return Term::app(std::bernoulli_distribution(0.5)(rng) ? Symbol::bot : Symbol::cz, {});
  }
  const Symbol s = syms[pick_sym(rng)];
  std::vector<Term> args;
  for (int i = 0; i < arity(s); ++i) args.push_back(random_term(rng, sig, vars, depth - 1));
  return Term::app(s, std::move(args));
}

/// A random formula of the given connective depth. Quantifiers bind names
/// from `bindable`, which may shadow or extend `vars`.
inline Formula random_formula(std::mt19937_64& rng, Sig sig, const std::vector<std::string>& vars, int depth,
                              const std::vector<std::string>& bindable = {}) {
  std::uniform_int_distribution<int> kind(0, bindable.empty() ? 4 : 6);
  if (depth == 0) {
    const Term a = random_term(rng, sig, vars, 2);
    const Term b = random_term(rng, sig, vars, 2);
    if (std::bernoulli_distribution(0.2)(rng)) return dsl::sub(a, b);
    return dsl::eq(a, b);
  }
  switch (kind(rng)) {
    case 0: return dsl::neg(random_formula(rng, sig, vars, depth - 1, bindable));
    case 1: return dsl::conj(random_formula(rng, sig, vars, depth - 1, bindable),
                             random_formula(rng, sig, vars, depth - 1, bindable));
    case 2: return dsl::disj(random_formula(rng, sig, vars, depth - 1, bindable),
                             random_formula(rng, sig, vars, depth - 1, bindable));
    case 3: return dsl::implies(random_formula(rng, sig, vars, depth - 1, bindable),
                                random_formula(rng, sig, vars, depth - 1, bindable));
    case 4: return random_formula(rng, sig, vars, 0, bindable);
    default: {
      const std::string v = bindable[std::uniform_int_distribution<std::size_t>(0, bindable.size() - 1)(rng)];
      std::vector<std::string> inner = vars;
      if (std::find(inner.begin(), inner.end(), v) == inner.end()) inner.push_back(v);
      Formula body = random_formula(rng, sig, inner, depth - 1, bindable);
      return kind(rng) % 2 ? dsl::exists(v, body) : dsl::forall(v, body);
    }
  }
}

// ---------------------------------------------------------------------------
// Equivalence checking

template <class Elem>
std::string format_assignment(const Assignment<Elem>& a) {
  std::string out;
  for (const auto& [k, v] : a) {
    if (!out.empty()) out += ", ";
    out += k + "=" + v.str();
  }
  return out;
}

/// Every combination of `values` for the variables in `vars`.
template <class Elem>
std::vector<Assignment<Elem>> assignments_over(const std::vector<std::string>& vars, const std::vector<Elem>& values) {
  std::vector<Assignment<Elem>> out{{}};
  for (const auto& v : vars) {
    std::vector<Assignment<Elem>> next;
    next.reserve(out.size() * values.size());
    for (const auto& a : out)
      for (const auto& x : values) {
        auto b = a;
        b[v] = x;
        next.push_back(std::move(b));
      }
    out = std::move(next);
  }
  return out;
}

struct EquivFailure {
  std::string assignment;
  bool lhs;
  bool rhs;
};

struct EquivReport {
  std::size_t checked = 0;
  std::vector<EquivFailure> failures;
  WitnessPool pool_used;  // the largest pool used
  std::optional<std::uint64_t> seed;
  std::vector<std::string> notes;

  bool ok() const { return failures.empty(); }
  std::string summary() const {
    return "checked=" + std::to_string(checked) + " failures=" + std::to_string(failures.size());
  }
};

/// An evaluation error raised while checking, tagged with the assignment.
class CheckError : public std::runtime_error {
public:
  CheckError(const std::string& what, std::string assignment)
      : std::runtime_error(what + " at " + assignment), assignment_(std::move(assignment)) {}
  const std::string& assignment() const noexcept { return assignment_; }

private:
  std::string assignment_;
};

template <class Elem>
using StructureFor = std::conditional_t<std::is_same_v<Elem, FinSet>, WStructure, LStructure>;

/// Compares a semantic predicate with pool-bounded evaluation of `rhs` on
/// every assignment of `gen`. `pool_for` maps an assignment to its pool.
template <class Elem, class Pred, class PoolPolicy>
EquivReport check_equiv(Pred&& lhs, const Formula& rhs, const std::vector<Assignment<Elem>>& gen, PoolPolicy&& pool_for,
                        std::optional<std::uint64_t> seed = std::nullopt) {
  EquivReport rep;
  rep.seed = seed;
  BoundedEvaluator<StructureFor<Elem>> eval(rhs);
  for (const auto& a : gen) {
    const WitnessPool pool = pool_for(a);
    if (pool.points.size() > rep.pool_used.points.size()) rep.pool_used = pool;
    bool l = false, r = false;
    try {
      l = lhs(a);
      r = eval(a, pool);
    } catch (const std::exception& e) {
      throw CheckError(e.what(), format_assignment(a));
    }
    ++rep.checked;
    if (l != r) rep.failures.push_back({format_assignment(a), l, r});
  }
  return rep;
}

template <class Elem, class Pred>
EquivReport check_equiv(Pred&& lhs, const Formula& rhs, const std::vector<Assignment<Elem>>& gen) {
  return check_equiv<Elem>(std::forward<Pred>(lhs), rhs, gen, [](const Assignment<Elem>& a) { return default_pool(a); });
}

} // namespace mclat

#endif // MCLAT_ORACLE_HPP
