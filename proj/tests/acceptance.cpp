// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failing criteria.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "mclat/mclat.hpp"

namespace {

using namespace mclat;

constexpr std::size_t kAllowedFailures = 0;
constexpr double kSuiteSeconds = 60.0;
constexpr std::uint64_t kSeed = 1;
constexpr std::size_t kPipelineSamples = 200;
constexpr std::size_t kRoundTrips = 1000;

struct Outcome {
  EquivReport rep;
  std::string extra;
};

int failed = 0;

void criterion(int n, const std::string& name, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  std::string error;
  try {
    o = body();
  } catch (const std::exception& e) {
    error = e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool pass = error.empty() && o.rep.failures.size() <= kAllowedFailures && secs < kSuiteSeconds;
  if (!pass) ++failed;
  std::printf("%s criterion %d %s: %s time=%.1fs", pass ? "PASS" : "FAIL", n, name.c_str(),
              error.empty() ? o.rep.summary().c_str() : ("error: " + error).c_str(), secs);
  if (!o.extra.empty()) std::printf(" (%s)", o.extra.c_str());
  std::printf("\n");
  for (std::size_t i = 0; i < o.rep.failures.size() && i < 5; ++i)
    std::printf("  counterexample: %s\n", o.rep.failures[i].assignment.c_str());
  std::fflush(stdout);
}

void merge(EquivReport& into, const EquivReport& from) {
  into.checked += from.checked;
  into.failures.insert(into.failures.end(), from.failures.begin(), from.failures.end());
  into.notes.insert(into.notes.end(), from.notes.begin(), from.notes.end());
}

void expect(EquivReport& rep, bool ok, const std::string& what) {
  ++rep.checked;
  if (!ok) rep.failures.push_back({what, true, false});
}

template <class Set, class Join, class Meet, class Le>
void lattice_laws(EquivReport& rep, const std::vector<Set>& sets, const Set& bottom, Join join, Meet meet, Le le) {
  for (const auto& a : sets) {
    expect(rep, join(a, a) == a && meet(a, a) == a, "idempotence at " + a.str());
    expect(rep, join(a, bottom) == a && meet(a, bottom) == bottom && le(bottom, a), "bottom at " + a.str());
    for (const auto& b : sets) {
      const std::string ab = a.str() + ", " + b.str();
      expect(rep, join(a, b) == join(b, a) && meet(a, b) == meet(b, a), "commutativity at " + ab);
      expect(rep, join(a, meet(a, b)) == a && meet(a, join(a, b)) == a, "absorption at " + ab);
      expect(rep, le(a, b) == (join(a, b) == b) && le(a, b) == (meet(a, b) == a), "order at " + ab);
      for (const auto& c : sets) {
        const std::string abc = ab + ", " + c.str();
        expect(rep, join(join(a, b), c) == join(a, join(b, c)) && meet(meet(a, b), c) == meet(a, meet(b, c)),
               "associativity at " + abc);
        expect(rep, meet(a, join(b, c)) == join(meet(a, b), meet(a, c)), "distributivity at " + abc);
      }
    }
  }
}

EquivReport kernel_laws() {
  EquivReport rep;

  const auto ws = enum_finsets(standard_pool(5));
  lattice_laws(rep, ws, FinSet{}, set_union, set_intersect, is_subset);

  const FinSet lpool = standard_pool(4);
  const auto ls = enum_fcis(lpool, 2, true);
  lattice_laws(rep, ls, FciSet{}, union_f, intersect_f, subseteq_f);

  // Pointwise meaning of the operations, probed between and beyond the endpoints.
  const FinSet probe = refine(lpool);
  for (const auto& a : ls)
    for (const auto& b : ls)
      for (const auto& p : probe) {
        const bool ok = contains(union_f(a, b), p) == (contains(a, p) || contains(b, p)) &&
                        contains(intersect_f(a, b), p) == (contains(a, p) && contains(b, p));
        expect(rep, ok, "pointwise operations at " + a.str() + ", " + b.str() + ", " + p.str());
      }

  // Normal forms: equal point sets have equal representations, and any
  // splitting or reordering of the components normalizes back.
  std::mt19937_64 rng(kSeed);
  for (const auto& a : ls) {
    for (const auto& b : ls) {
      bool same = true;
      for (const auto& p : probe) same = same && contains(a, p) == contains(b, p);
      expect(rep, same == (a == b), "normal form uniqueness at " + a.str() + ", " + b.str());
    }
    std::vector<Component> parts;
    for (const auto& g : a.segments()) {
      if (g.lo < g.hi) {
        const Point mid = midpoint(g.lo, g.hi);
        parts.push_back(Component::segment(g.lo, mid));
        parts.push_back(Component::segment(mid, g.hi));
      }
      parts.push_back(Component::segment(g.lo, g.lo));
    }
    if (a.ray()) {
      parts.push_back(Component::ray(*a.ray()));
      parts.push_back(Component::ray(above(*a.ray())));
    }
    std::shuffle(parts.begin(), parts.end(), rng);
    expect(rep, normalize(parts) == a, "renormalization at " + a.str());
  }

  // Round trips through the printers and parsers. Parsing renames bound
  // variables apart, so formulas are compared up to that renaming.
  for (std::size_t i = 0; i < kRoundTrips; ++i) {
    const FinSet pts = random_points(rng, 6);
    const FinSet w = random_finset(rng, pts);
    expect(rep, parse_finset(w.str()) == w, "finset round trip at " + w.str());
    const FciSet l = random_fci(rng, pts, 3, true);
    expect(rep, parse_fci(l.str()) == l, "interval set round trip at " + l.str());
    for (Sig sig : {Sig::W, Sig::L}) {
      const Formula f = random_formula(rng, sig, {"X", "Y"}, 3, {"Y", "Z"});
      const std::string text = print(f);
      const Formula apart = uniquify_bound(f);
      bool ok = false;
      try {
        const Formula g = parse(text, sig);
        ok = g == apart && print(g) == print(apart) && parse(print(g), sig) == g;
      } catch (const ParseError&) {
      }
      expect(rep, ok, "formula round trip at " + text);
    }
  }
  return rep;
}

} // namespace

int main() {
  criterion(1, "bottom elimination", [] { return Outcome{checks::notbot(5), ""}; });
  criterion(2, "positive existential rewriting", [] { return Outcome{checks::posex(4), ""}; });
  criterion(3, "successor characterization", [] {
    auto rep = checks::ipschar(4);
    std::string extra;
    for (const auto& n : rep.notes) extra += (extra.empty() ? "" : "; ") + n;
    return Outcome{rep, extra};
  });
  criterion(4, "endpoint reconstruction", [] { return Outcome{checks::endpoints(5), ""}; });
  criterion(5, "membership and inclusion formulas", [] {
    EquivReport rep = checks::member(5);
    merge(rep, checks::subset(5));
    return Outcome{rep, ""};
  });
  criterion(6, "mutual interpretation", [] {
    EquivReport rep = checks::w2l(4);
    merge(rep, checks::l2w(4));
    return Outcome{rep, ""};
  });
  criterion(7, "existential pipeline", [] {
    return Outcome{checks::pipeline(kSeed, kPipelineSamples), "seed=" + std::to_string(kSeed)};
  });
  criterion(8, "kernel laws", [] { return Outcome{kernel_laws(), ""}; });
  return failed;
}
