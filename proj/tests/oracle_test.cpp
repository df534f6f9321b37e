#include <gtest/gtest.h>

#include <set>

#include "mclat/oracle.hpp"
#include "mclat/transforms.hpp"

using namespace mclat;

namespace {

FinSet S(std::string_view s) { return parse_finset(s); }
FciSet F(std::string_view s) { return parse_fci(s); }

// Independent count of interval sets with endpoints in an n-point pool:
// label each point, each open gap between neighbours (only if both ends are
// in) and the tail (only if the last point is in), then count bounded runs.
std::size_t count_by_labels(std::size_t n, std::size_t max_segments, bool allow_ray) {
  std::size_t total = 0;
  const std::size_t labels = 2 * n;  // n points, n-1 gaps, 1 tail
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << labels); ++m) {
    auto point = [&](std::size_t i) { return (m >> i & 1) != 0; };
    auto gap = [&](std::size_t i) { return (m >> (n + i) & 1) != 0; };
    const bool tail = n > 0 && (m >> (2 * n - 1) & 1);
    bool valid = true;
    for (std::size_t i = 0; i + 1 < n; ++i)
      if (gap(i) && !(point(i) && point(i + 1))) valid = false;
    if (tail && (!allow_ray || !point(n - 1))) valid = false;
    if (!valid) continue;
    std::size_t runs = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (point(i) && (i == 0 || !gap(i - 1))) ++runs;
    if (tail) --runs;
    if (runs <= max_segments) ++total;
  }
  return total;
}

} // namespace

TEST(Oracle, EnumFinsets) {
  EXPECT_EQ(enum_finsets(S("{0,1}")), (std::vector<FinSet>{S("{}"), S("{0}"), S("{1}"), S("{0,1}")}));
  EXPECT_EQ(enum_finsets(S("{}")), std::vector<FinSet>{S("{}")});
  EXPECT_THROW(enum_finsets(standard_pool(13)), PreconditionError);
  const auto all = enum_finsets(standard_pool(6));
  EXPECT_EQ(all.size(), 64u);
  EXPECT_EQ(std::set<FinSet>(all.begin(), all.end()).size(), 64u);
}

TEST(Oracle, EnumFcis) {
  const auto small = enum_fcis(S("{0,1}"), 1, false);
  EXPECT_EQ(small.size(), 4u);
  EXPECT_EQ(std::set<FciSet>(small.begin(), small.end()), (std::set<FciSet>{F("empty"), F("{0}"), F("{1}"), F("[0,1]")}));
  EXPECT_EQ(enum_fcis(S("{0,1}"), 1, false), small);
  const auto with_ray = enum_fcis(S("{0}"), 1, true);
  EXPECT_EQ(std::set<FciSet>(with_ray.begin(), with_ray.end()), (std::set<FciSet>{F("empty"), F("{0}"), F("[0,*)")}));
  EXPECT_THROW(enum_fcis(standard_pool(9), 1, true), PreconditionError);
}

TEST(Oracle, EnumFcisGoldenCount) {
  const auto all = enum_fcis(S("{0,1,2}"), 2, true);
  EXPECT_EQ(all.size(), 20u);
  EXPECT_EQ(all.size(), count_by_labels(3, 2, true));
}

TEST(Oracle, EnumFcisCompleteAndDistinct) {
  for (std::size_t n = 0; n <= 5; ++n)
    for (std::size_t segs = 0; segs <= 3; ++segs)
      for (bool ray : {false, true}) {
        const FinSet pool = standard_pool(n);
        const auto all = enum_fcis(pool, segs, ray);
        EXPECT_EQ(all.size(), count_by_labels(n, segs, ray)) << n << " " << segs << " " << ray;
        EXPECT_EQ(std::set<FciSet>(all.begin(), all.end()).size(), all.size());
        for (const auto& s : all) {
          EXPECT_LE(s.segments().size(), segs);
          EXPECT_TRUE(ray || !s.ray());
          EXPECT_TRUE(is_subset(boundary(s), pool));
        }
      }
}

TEST(Oracle, StandardPool) {
  EXPECT_EQ(standard_pool(5), S("{0, 1, 2, 5/2, 4}"));
  EXPECT_EQ(standard_pool(8), S("{0, 1, 2, 5/2, 4, 9/2, 6, 13/2}"));
}

TEST(Oracle, RandomGeneratorsAreValid) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 300; ++i) {
    const FinSet pts = random_points(rng, 6);
    ASSERT_EQ(pts.size(), 6u);
    for (const auto& p : pts) {
      EXPECT_GE(p, Point(0));
      EXPECT_LE(p, Point(10));
    }
    const FciSet s = random_fci(rng, pts, 3, true);
    EXPECT_LE(s.segments().size(), 3u);
    std::vector<Component> comps;
    for (const auto& g : s.segments()) comps.push_back(Component::segment(g.lo, g.hi));
    if (s.ray()) comps.push_back(Component::ray(*s.ray()));
    EXPECT_EQ(normalize(comps), s);
    EXPECT_EQ(parse_fci(s.str()), s);
    EXPECT_TRUE(is_subset(boundary(s), pts));
    const FinSet f = random_finset(rng, pts);
    EXPECT_TRUE(is_subset(f, pts));
    EXPECT_EQ(parse_finset(f.str()), f);
  }
}

TEST(Oracle, RandomGeneratorsAreDeterministic) {
  std::mt19937_64 a(99), b(99);
  for (int i = 0; i < 20; ++i) {
    EXPECT_EQ(print(random_formula(a, Sig::L, {"X", "Y"}, 3, {"Z"})),
              print(random_formula(b, Sig::L, {"X", "Y"}, 3, {"Z"})));
  }
}

TEST(Oracle, NotbotExhaustive) {
  const auto gen = assignments_over<FinSet>({"A"}, enum_finsets(standard_pool(5)));
  const auto rep = check_equiv<FinSet>([](const WAssignment& a) { return !a.at("A").empty(); },
                                       notbot_rhs(dsl::var("A")), gen);
  EXPECT_TRUE(rep.ok());
  EXPECT_EQ(rep.summary(), "checked=32 failures=0");
}

TEST(Oracle, NotbotMutantIsCaught) {
  using namespace dsl;
  const Formula mutant = sub(cz(), ips(cup(var("A"), cz()), var("A")));
  const auto gen = assignments_over<FinSet>({"A"}, enum_finsets(standard_pool(5)));
  const auto rep = check_equiv<FinSet>([](const WAssignment& a) { return !a.at("A").empty(); }, mutant, gen);
  ASSERT_EQ(rep.failures.size(), 1u);
  EXPECT_EQ(rep.failures[0].assignment, "A={0}");
  EXPECT_TRUE(rep.failures[0].lhs);
  EXPECT_FALSE(rep.failures[0].rhs);
}

TEST(Oracle, MembershipMutantIsCaught) {
  using namespace dsl;
  NameSupply names;
  for (const char* v : {"X_l", "X_r", "Z"}) names.reserve(v);
  const Term xl = var("X_l"), xr = var("X_r"), z = var("Z"), d = cup(xl, xr);
  const Formula mutant =
      conj(neq(d, bot()), disj(sub(z, d), conj(detail::bounded_of(xl, xr), phi_bdd_member(xl, xr, z, names))));
  const FinSet pts = S("{0, 1/2, 1, 3/2, 2, 3}");
  std::vector<WAssignment> gen;
  std::vector<bool> truth;
  for (const auto& x : enum_fcis(S("{0,1,2}"), 2, true)) {
    for (const auto& p : pts) {
      gen.push_back({{"X_l", left_pts(x)}, {"X_r", right_pts(x)}, {"Z", FinSet{p}}});
      truth.push_back(contains(x, p));
    }
  }
  std::size_t k = 0;
  auto lhs = [&](const WAssignment&) { return truth[k++]; };
  const auto good = check_equiv<FinSet>(lhs, phi_in(), gen);
  EXPECT_TRUE(good.ok()) << good.summary();
  k = 0;
  const auto bad = check_equiv<FinSet>(lhs, mutant, gen);
  EXPECT_FALSE(bad.ok());
  for (const auto& f : bad.failures) EXPECT_TRUE(f.lhs);
}

TEST(Oracle, EmptyGenerator) {
  const auto rep = check_equiv<FinSet>([](const WAssignment&) { return true; }, parse("X = X", Sig::W),
                                       std::vector<WAssignment>{});
  EXPECT_EQ(rep.checked, 0u);
  EXPECT_TRUE(rep.ok());
}

TEST(Oracle, ErrorsCarryAssignment) {
  const std::vector<WAssignment> gen{{{"X", S("{1}")}}};
  try {
    check_equiv<FinSet>([](const WAssignment&) { return true; }, parse("X = Y", Sig::W), gen);
    FAIL();
  } catch (const CheckError& e) {
    EXPECT_EQ(e.assignment(), "X={1}");
  }
}

TEST(Oracle, SeedIsRecorded) {
  const auto rep = check_equiv<FinSet>([](const WAssignment&) { return true; }, parse("X = X", Sig::W),
                                       std::vector<WAssignment>{{{"X", S("{}")}}},
                                       [](const WAssignment& a) { return default_pool(a); }, 1234);
  EXPECT_EQ(rep.seed, 1234u);
  EXPECT_EQ(rep.pool_used.points, S("{0, 1}"));
}

TEST(Oracle, AssignmentsOver) {
  const auto all = assignments_over<FinSet>({"X", "Y"}, {S("{}"), S("{1}"), S("{2}")});
  EXPECT_EQ(all.size(), 9u);
  EXPECT_EQ(format_assignment(all[5]), "X={1}, Y={2}");
}
