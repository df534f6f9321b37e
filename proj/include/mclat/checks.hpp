#ifndef MCLAT_CHECKS_HPP
#define MCLAT_CHECKS_HPP

// Property checks shared by the command line and the acceptance run.

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "oracle.hpp"
#include "transforms.hpp"

namespace mclat::checks {

namespace detail {

inline void absorb(EquivReport& into, const EquivReport& r, const std::string& label) {
  into.checked += r.checked;
  for (const auto& f : r.failures) into.failures.push_back({label + ": " + f.assignment, f.lhs, f.rhs});
  if (r.pool_used.points.size() > into.pool_used.points.size()) into.pool_used = r.pool_used;
}

inline void fail(EquivReport& rep, std::string what, bool lhs, bool rhs) {
  rep.failures.push_back({std::move(what), lhs, rhs});
}

inline WitnessPool pool_over(const FinSet& pts) { return {pts, pts.size(), true}; }

inline std::vector<std::string> sorted_free(const Formula& f) {
  const auto s = free_vars(f);
  return {s.begin(), s.end()};
}

} // namespace detail

/// A != bot against its positive form, on every subset of an n-point pool.
inline EquivReport notbot(std::size_t n = 5) {
  const auto gen = assignments_over<FinSet>({"A"}, enum_finsets(standard_pool(n)));
  return check_equiv<FinSet>([](const WAssignment& a) { return !a.at("A").empty(); }, notbot_rhs(dsl::var("A")),
                             gen);
}

/// Positive existential rewriting: class and agreement on every assignment
/// of subsets of an n-point pool.
inline EquivReport posex(std::size_t n = 4) {
  EquivReport rep;
  const FinSet pts = standard_pool(n);
  const auto values = enum_finsets(pts);
  for (const auto& text : corpus::w_negations()) {
    const Formula f = parse(text, Sig::W);
    const Formula g = to_positive_existential(f);
    ++rep.checked;
    if (classify(g) != FormulaClass::positive_existential)
      detail::fail(rep, text + ": output is " + std::string(class_name(classify(g))), true, false);
    WEvaluator src(f);
    const auto gen = assignments_over<FinSet>(detail::sorted_free(f), values);
    detail::absorb(rep,
                   check_equiv<FinSet>([&](const WAssignment& a) { return src(a, detail::pool_over(pts)); }, g, gen,
                                       [&](const WAssignment&) { return detail::pool_over(pts); }),
                   text);
  }
  return rep;
}

/// Both directions of the two-clause ips characterisation for every A, B, C
/// over an n-point pool with B nonempty and within A. Candidate D range over
/// sets with endpoints in the pool and its midpoints.
inline EquivReport ipschar(std::size_t n = 4) {
  EquivReport rep;
  const FinSet pts = standard_pool(n);
  std::vector<Point> dp(pts.begin(), pts.end());
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) dp.push_back(midpoint(pts[i], pts[i + 1]));
  const FinSet dpool(std::move(dp));
  std::map<FinSet, std::vector<FciSet>> by_right;
  for (const auto& d : enum_fcis(dpool, 3, true)) by_right[right_pts(d)].push_back(d);
  const auto subsets = enum_finsets(pts);
  std::size_t unguarded_wrong = 0;
  std::string first_unguarded;
  for (const auto& a : subsets)
    for (const auto& b : subsets) {
      if (b.empty() || !is_subset(b, a)) continue;
      const FinSet truth = ips(a, b);
      const IpsClause expected = is_subset(min_s(a), b) ? IpsClause::min_in_b : IpsClause::min_not_in_b;
      for (const auto& c : subsets) {
        ++rep.checked;
        const std::string at = "A=" + a.str() + ", B=" + b.str() + ", C=" + c.str();
        if (c == truth) {
          const FciSet d = witness_D(a, b, c);
          if (ips_clause(a, b, c, d) != expected) detail::fail(rep, at + ", D=" + d.str() + " (forward)", true, false);
        }
        bool found = false, found_unguarded = false;
        FciSet witness;
        if (auto it = by_right.find(c); it != by_right.end())
          for (const auto& d : it->second) {
            if (!found && ips_clause(a, b, c, d) != IpsClause::none) {
              found = true;
              witness = d;
            }
            if (!found_unguarded && ips_clause(a, b, c, d, ClauseForm::unguarded) != IpsClause::none) {
              found_unguarded = true;
              if (c != truth && first_unguarded.empty()) first_unguarded = at + ", D=" + d.str();
            }
            if (found && found_unguarded) break;
          }
        if (found != (c == truth))
          detail::fail(rep, at + (found ? ", D=" + witness.str() : std::string()) + " (converse)", c == truth, found);
        if (found_unguarded && c != truth) ++unguarded_wrong;
      }
    }
  rep.pool_used = detail::pool_over(dpool);
  rep.notes.push_back("without the max(A) guard the clauses accept " + std::to_string(unguarded_wrong) +
                      " wrong triples" + (first_unguarded.empty() ? std::string() : ", first " + first_unguarded));
  return rep;
}

/// Endpoints: every nonempty set over an n-point pool satisfies the
/// domain formula and is rebuilt from its endpoints; every pair of subsets
/// satisfies the domain formula exactly when it is the endpoint pair of a set.
inline EquivReport endpoints(std::size_t n = 5) {
  EquivReport rep;
  const FinSet pts = standard_pool(n);
  const WitnessPool pool = detail::pool_over(pts);
  WEvaluator delta(delta_domain(), {"X_l", "X_r"});
  for (const auto& a : enum_fcis(pts, 3, true)) {
    if (a.empty()) continue;
    ++rep.checked;
    const WAssignment w{{"X_l", left_pts(a)}, {"X_r", right_pts(a)}};
    if (!delta(w, pool)) detail::fail(rep, "A=" + a.str() + " (domain)", true, false);
    try {
      if (build_from_endpoints(left_pts(a), right_pts(a)) != a) detail::fail(rep, "A=" + a.str() + " (rebuild)", true, false);
    } catch (const PreconditionError&) {
      detail::fail(rep, "A=" + a.str() + " (rebuild rejected)", true, false);
    }
  }
  const auto subsets = enum_finsets(pts);
  for (const auto& b : subsets)
    for (const auto& c : subsets) {
      ++rep.checked;
      const bool holds = delta({{"X_l", b}, {"X_r", c}}, pool);
      bool rebuilt = false;
      if (!b.empty()) try {
          const FciSet s = build_from_endpoints(b, c);
          rebuilt = left_pts(s) == b && right_pts(s) == c;
        } catch (const PreconditionError&) {
        }
      if (holds != rebuilt) detail::fail(rep, "B=" + b.str() + ", C=" + c.str(), rebuilt, holds);
    }
  rep.pool_used = pool;
  return rep;
}

namespace detail {

inline std::vector<FciSet> bounded_sets(std::size_t n) { return enum_fcis(standard_pool(n), 3, true); }

} // namespace detail

/// Membership formula against `contains` for every set over an n-point pool
/// and every singleton of the refined pool.
inline EquivReport member(std::size_t n = 5) {
  const FinSet probe = refine(standard_pool(n));
  std::vector<WAssignment> gen;
  std::vector<bool> truth;
  for (const auto& a : detail::bounded_sets(n))
    for (const auto& p : probe) {
      gen.push_back({{"X_l", left_pts(a)}, {"X_r", right_pts(a)}, {"Z", FinSet::singleton(p)}});
      truth.push_back(contains(a, p));
    }
  std::size_t k = 0;
  return check_equiv<FinSet>([&](const WAssignment&) { return truth[k++]; }, phi_in(), gen,
                             [&](const WAssignment&) { return detail::pool_over(probe); });
}

/// Subset formula against `subseteq_f` for every pair of sets over an
/// n-point pool; singletons range over the refined pool.
inline EquivReport subset(std::size_t n = 5) {
  const FinSet probe = refine(standard_pool(n));
  const auto sets = detail::bounded_sets(n);
  std::vector<WAssignment> gen;
  std::vector<bool> truth;
  for (const auto& a : sets)
    for (const auto& b : sets) {
      gen.push_back({{"X_l", left_pts(a)}, {"X_r", right_pts(a)}, {"Y_l", left_pts(b)}, {"Y_r", right_pts(b)}});
      truth.push_back(subseteq_f(a, b));
    }
  std::size_t k = 0;
  return check_equiv<FinSet>([&](const WAssignment&) { return truth[k++]; }, phi_subseteq(), gen,
                             [&](const WAssignment&) { return detail::pool_over(probe); });
}

/// W to L translation on embedded finite arguments: every assignment of
/// subsets of an n-point pool.
inline EquivReport w2l(std::size_t n = 4) {
  EquivReport rep;
  const FinSet pts = standard_pool(n);
  const WitnessPool pool = detail::pool_over(pts);
  const auto values = enum_finsets(pts);
  for (const auto& text : corpus::w_positive()) {
    const Formula f = parse(text, Sig::W);
    const Formula g = translate_W_to_L(f);
    ++rep.checked;
    if (!is_existential(g)) detail::fail(rep, text + ": output is not existential", true, false);
    LEvaluator target(g, detail::sorted_free(f));
    detail::absorb(rep,
                   check_equiv<FinSet>(
                       [&](const WAssignment& a) {
                         LAssignment e;
                         for (const auto& [x, v] : a) e[x] = embed_finset(v);
                         return target(e, pool);
                       },
                       f, assignments_over<FinSet>(detail::sorted_free(f), values),
                       [&](const WAssignment&) { return pool; }),
                   text);
  }
  return rep;
}

/// L to W translation under the coordinate map. Formulas with at most two
/// free variables range over every set over an n-point pool; three-variable
/// formulas over the sets with at most one bounded component.
inline EquivReport l2w(std::size_t n = 4) {
  EquivReport rep;
  const FinSet pts = standard_pool(n);
  const WitnessPool pool = detail::pool_over(refine(pts));
  const auto wide = enum_fcis(pts, 3, true), narrow = enum_fcis(pts, 1, true);
  for (const auto& text : corpus::l_formulas()) {
    const Formula f = parse(text, Sig::L);
    const LtoWResult w = translate_L_to_W_with_pairs(f);
    LEvaluator source(f);
    const auto vars = detail::sorted_free(f);
    for (const auto& a : assignments_over<FciSet>(vars, vars.size() > 2 ? narrow : wide)) {
      WAssignment c;
      for (const auto& [x, v] : a) {
        c[w.pairs.at(x).left_var] = left_pts(v);
        c[w.pairs.at(x).right_var] = right_pts(v);
      }
      ++rep.checked;
      bool l = false, r = false;
      try {
        l = source(a, pool);
        r = eval_bounded(w.formula, c, pool);
      } catch (const std::exception& e) {
        throw CheckError(e.what(), text + " at " + format_assignment(a));
      }
      if (l != r) detail::fail(rep, text + ": " + format_assignment(a), l, r);
    }
  }
  rep.pool_used = pool;
  return rep;
}

/// Pipeline: outputs are existential and agree with their sources on
/// `samples` random assignments per formula, each drawing every variable from
/// six random rationals; unsupported inputs raise fragment errors.
inline EquivReport pipeline(std::uint64_t seed = 1, std::size_t samples = 200) {
  EquivReport rep;
  rep.seed = seed;
  std::mt19937_64 rng(seed);
  for (const auto& text : corpus::pipeline_supported()) {
    const Formula f = parse(text, Sig::L);
    Formula g = dsl::truth();
    ++rep.checked;
    try {
      g = mclat::pipeline(f);
    } catch (const FragmentError& e) {
      detail::fail(rep, text + ": " + e.what(), true, false);
      continue;
    }
    if (!is_existential(g)) detail::fail(rep, text + ": output is not existential", true, false);
    LEvaluator source(f), target(g, detail::sorted_free(f));
    for (std::size_t i = 0; i < samples; ++i) {
      const FinSet pts = random_points(rng, 6);
      LAssignment a;
      for (const auto& x : detail::sorted_free(f)) a[x] = random_fci(rng, pts, 3, true);
      const WitnessPool pool = default_pool(a);
      if (pool.points.size() > rep.pool_used.points.size()) rep.pool_used = pool;
      ++rep.checked;
      bool l = false, r = false;
      try {
        l = source(a, pool);
        r = target(a, pool);
      } catch (const std::exception& e) {
        throw CheckError(e.what(), text + " at " + format_assignment(a));
      }
      if (l != r) detail::fail(rep, text + ": " + format_assignment(a), l, r);
    }
  }
  for (const auto& text : corpus::pipeline_unsupported()) {
    ++rep.checked;
    try {
      mclat::pipeline(parse(text, Sig::L));
      detail::fail(rep, text + ": produced output outside the fragment", false, true);
    } catch (const FragmentError&) {
    }
  }
  return rep;
}

} // namespace mclat::checks

#endif // MCLAT_CHECKS_HPP
