#include <gtest/gtest.h>

#include <random>

#include "mclat/checks.hpp"
#include "mclat/oracle.hpp"
#include "mclat/transforms.hpp"
#include "reference_eval.hpp"

using namespace mclat;

namespace {

FciSet F(std::string_view s) { return parse_fci(s); }
FinSet S(std::string_view s) { return parse_finset(s); }
Formula W(std::string_view s) { return parse(s, Sig::W); }
Formula L(std::string_view s) { return parse(s, Sig::L); }

bool ev(const Formula& f, const WAssignment& a) { return eval_bounded(f, a, default_pool(a)); }
bool ev(const Formula& f, const LAssignment& a) { return eval_bounded(f, a, default_pool(a)); }

WAssignment coords(const std::string& x, const FciSet& a) { return {{x + "_l", left_pts(a)}, {x + "_r", right_pts(a)}}; }

} // namespace

TEST(Transforms, DeltaTerm) {
  using namespace dsl;
  const Term x = var("X"), y = var("Y");
  for (const auto& v : enum_finsets(standard_pool(3))) {
    EXPECT_TRUE(eval_term(delta_term(x, x), WAssignment{{"X", v}}).empty());
    EXPECT_EQ(eval_term(delta_term(x, bot()), WAssignment{{"X", v}}), v);
  }
  EXPECT_EQ(eval_term(delta_term(x, y), WAssignment{{"X", S("{1,2}")}, {"Y", S("{2,3}")}}), S("{1,3}"));
}

TEST(Transforms, RelcompPinsTheComplement) {
  using namespace dsl;
  const Formula f = relcomp(var("C"), var("A"), var("B"));
  const auto sets = enum_finsets(standard_pool(3));
  for (const auto& a : sets)
    for (const auto& b : sets)
      for (const auto& c : sets)
        EXPECT_EQ(eval_qf(f, WAssignment{{"A", a}, {"B", b}, {"C", c}}), c == rel_complement(a, b));
}

TEST(Transforms, PositiveExistentialExamples) {
  const Formula g = to_positive_existential(W("!X = bot"));
  EXPECT_EQ(classify(g), FormulaClass::positive_existential);
  EXPECT_TRUE(ev(g, WAssignment{{"X", S("{1}")}}));
  EXPECT_FALSE(ev(g, WAssignment{{"X", S("{}")}}));
  EXPECT_EQ(to_positive_existential(W("X = cz")), W("X = cz"));
  EXPECT_THROW(to_positive_existential(W("A Y. Y = X")), FragmentError);
  EXPECT_THROW(to_positive_existential(W("!(E Y. Y = X)")), FragmentError);
  try {
    to_positive_existential(W("E Z. A Y. Y sub Z"));
    FAIL();
  } catch (const FragmentError& e) {
    EXPECT_EQ(e.var(), "Y");
  }
  EXPECT_THROW(to_positive_existential(L("l(X) = X")), std::exception);
}

TEST(Transforms, PositiveExistentialDeterministic) {
  const Formula f = W("!cup(X,Y) = cap(X,Y) | !min(X) = max(Y)");
  EXPECT_EQ(print(to_positive_existential(f)), print(to_positive_existential(f)));
}

TEST(Transforms, PositiveExistentialIdempotentClass) {
  const auto values = enum_finsets(standard_pool(3));
  const WitnessPool pool{standard_pool(3), 3, true};
  for (const auto& text : {"E Y. (Y sub X & ips(X,Y) = Y)", "X = cz | cup(X,Y) = Y"}) {
    const Formula f = W(text);
    const Formula g = to_positive_existential(f);
    EXPECT_EQ(classify(g), FormulaClass::positive_existential);
    for (const auto& a : assignments_over<FinSet>({"X", "Y"}, values))
      EXPECT_EQ(eval_bounded(f, a, pool), eval_bounded(g, a, pool)) << text;
  }
}

TEST(Transforms, PositiveExistentialRandom) {
  std::mt19937_64 rng(11);
  const WitnessPool pool{standard_pool(3), 3, true};
  const auto gen = assignments_over<FinSet>({"X", "Y"}, enum_finsets(pool.points));
  for (int i = 0; i < 40; ++i) {
    const Formula f = random_formula(rng, Sig::W, {"X", "Y"}, 2);
    const Formula g = to_positive_existential(f);
    ASSERT_EQ(classify(g), FormulaClass::positive_existential) << print(f);
    for (const auto& a : gen) ASSERT_EQ(eval_bounded(f, a, pool), eval_bounded(g, a, pool)) << print(f);
  }
}

TEST(Transforms, SimplifyPreservesTruth) {
  std::mt19937_64 rng(13);
  const WitnessPool pool{standard_pool(3), 3, true};
  const auto gen = assignments_over<FinSet>({"X"}, enum_finsets(pool.points));
  for (int i = 0; i < 100; ++i) {
    const Formula f = random_formula(rng, Sig::W, {"X"}, 3, {"Y"});
    const Formula g = simplify(f);
    for (const auto& a : gen) ASSERT_EQ(reference::eval(f, a, pool), reference::eval(g, a, pool)) << print(f);
  }
  EXPECT_EQ(simplify(W("E Y. (Y = cup(X,cz) & Y sub X)")), W("cup(X,cz) sub X"));
  EXPECT_EQ(simplify(W("E Y. Y = X")), dsl::truth());
  EXPECT_EQ(simplify(W("X = Y & X = Y")), W("X = Y"));
}

TEST(Transforms, SimplifyDropsEndpointsOfFiniteTerms) {
  EXPECT_EQ(simplify(L("l(cup(r(X),min(Y))) = r(cup(r(X),min(Y)))")), dsl::truth());
  EXPECT_EQ(simplify(L("l(cap(X,max(Y))) = Z")), L("cap(X,max(Y)) = Z"));
  EXPECT_EQ(simplify(L("l(X) = r(X)")), L("l(X) = r(X)"));
  EXPECT_EQ(simplify(L("l(cup(X,cz)) = cz")), L("l(cup(X,cz)) = cz"));

  std::mt19937_64 rng(14);
  const FinSet pts = standard_pool(3);
  const WitnessPool pool{pts, 1, true};
  const auto gen = assignments_over<FciSet>({"X"}, enum_fcis(pts, 2, true));
  for (int i = 0; i < 60; ++i) {
    const Formula f = random_formula(rng, Sig::L, {"X"}, 2, {"Y"});
    const Formula g = simplify(f);
    for (const auto& a : gen) ASSERT_EQ(reference::eval(f, a, pool), reference::eval(g, a, pool)) << print(f);
  }
}

TEST(Transforms, PhiIpsExamples) {
  const Formula phi = phi_ips();
  EXPECT_EQ(classify(phi), FormulaClass::existential);
  auto at = [&](std::string_view a, std::string_view b, std::string_view c) {
    const LAssignment v{{"X", embed_finset(S(a))}, {"Y", embed_finset(S(b))}, {"Z", embed_finset(S(c))}};
    return ev(phi, v);
  };
  EXPECT_TRUE(at("{1,2,5}", "{2,5}", "{1,2}"));
  EXPECT_TRUE(at("{}", "{1}", "{}"));
  EXPECT_FALSE(at("{1,2,5}", "{2,5}", "{1}"));
  EXPECT_FALSE(at("{1,2}", "{2}", "{1,2}"));
  EXPECT_EQ(witness_D(S("{1,2,5}"), S("{2,5}"), S("{1,2}")), F("[0,1]+{2}+[5,*)"));
}

TEST(Transforms, PhiIpsSound) {
  const Formula phi = phi_ips();
  const FinSet pts = standard_pool(4);
  const WitnessPool pool{pts, pts.size(), true};
  LEvaluator e(phi);
  const auto sets = enum_finsets(pts);
  for (const auto& a : sets)
    for (const auto& b : sets)
      for (const auto& c : sets) {
        const LAssignment v{{"X", embed_finset(a)}, {"Y", embed_finset(b)}, {"Z", embed_finset(c)}};
        ASSERT_EQ(e(v, pool), ips(a, b) == c) << a << " " << b << " " << c;
      }
}

TEST(Transforms, WToLExamples) {
  const Formula psi = translate_W_to_L(W("cz sub ips(cup(X,cz),X)"));
  EXPECT_TRUE(is_existential(psi));
  EXPECT_NO_THROW(check_signature(psi, Sig::L));
  EXPECT_TRUE(ev(psi, LAssignment{{"X", embed_finset(S("{2}"))}}));
  EXPECT_FALSE(ev(psi, LAssignment{{"X", embed_finset(S("{}"))}}));
  EXPECT_EQ(translate_W_to_L(W("X = bot")), L("X = bot"));
  EXPECT_THROW(translate_W_to_L(W("A Y. Y sub X")), FragmentError);
  EXPECT_THROW(translate_W_to_L(W("!X = bot")), FragmentError);
}

TEST(Transforms, WToLRelativizesQuantifiers) {
  const Formula f = W("E Y. (cup(Y,X) = Y & max(Y) = bot & cz sub Y)");
  const Formula psi = translate_W_to_L(f);
  EXPECT_TRUE(is_existential(psi));
  // Y = [0,*) satisfies the body in L; only the finiteness guard rules it out.
  EXPECT_TRUE(ev(L("E Y. (cup(Y,X) = Y & max(Y) = bot & cz sub Y)"), LAssignment{{"X", F("empty")}}));
  EXPECT_FALSE(ev(psi, LAssignment{{"X", F("empty")}}));
  EXPECT_FALSE(ev(f, WAssignment{{"X", S("{}")}}));
}

TEST(Transforms, MembershipExamples) {
  const Formula phi = phi_in();
  auto at = [&](std::string_view z) {
    WAssignment a = coords("X", F("[1,2]+[3,*)"));
    a["Z"] = S(z);
    return ev(phi, a);
  };
  EXPECT_EQ(left_pts(F("[1,2]+[3,*)")), S("{1,3}"));
  EXPECT_FALSE(at("{5/2}"));
  EXPECT_TRUE(at("{7/2}"));
  EXPECT_TRUE(at("{3/2}"));
  EXPECT_TRUE(at("{2}"));
  EXPECT_FALSE(at("{1/2}"));
}

TEST(Transforms, DomainExamples) {
  const Formula d = delta_domain();
  EXPECT_TRUE(ev(d, WAssignment{{"X_l", S("{0,3}")}, {"X_r", S("{1}")}}));
  EXPECT_FALSE(ev(d, WAssignment{{"X_l", S("{}")}, {"X_r", S("{1}")}}));
  EXPECT_FALSE(ev(d, WAssignment{{"X_l", S("{}")}, {"X_r", S("{}")}}));
  EXPECT_FALSE(ev(d, WAssignment{{"X_l", S("{1}")}, {"X_r", S("{0}")}}));
  EXPECT_EQ(build_from_endpoints(S("{0,3}"), S("{1}")), F("[0,1]+[3,*)"));
}

TEST(Transforms, SubsetExample) {
  const Formula phi = phi_subseteq();
  WAssignment a = coords("X", F("[1,2]"));
  a.merge(coords("Y", F("[0,3]")));
  EXPECT_TRUE(ev(phi, a));
  WAssignment b = coords("X", F("[0,3]"));
  b.merge(coords("Y", F("[1,2]")));
  EXPECT_FALSE(ev(phi, b));
}

TEST(Transforms, AtDefinesSingletons) {
  for (const auto& z : enum_finsets(standard_pool(4)))
    EXPECT_EQ(eval_qf(at(), WAssignment{{"Z", z}}), z.size() == 1);
}

TEST(Transforms, LToWExamples) {
  const LtoWResult w = translate_L_to_W_with_pairs(L("l(X) = r(X)"));
  const CoordinatePair& p = w.pairs.at("X");
  EXPECT_EQ(p.left_var, "X_l");
  EXPECT_EQ(p.right_var, "X_r");
  EXPECT_FALSE(ev(w.formula, coords("X", F("[1,2]"))));
  EXPECT_TRUE(ev(w.formula, coords("X", F("{3}+{5}"))));

  const Formula bot = translate_L_to_W(L("X = bot"));
  for (const auto& a : enum_fcis(standard_pool(3), 2, true)) EXPECT_EQ(ev(bot, coords("X", a)), a.empty());

  const Formula sub = translate_L_to_W(L("X sub Y"));
  WAssignment c = coords("X", F("[1,2]"));
  c.merge(coords("Y", F("[0,3]")));
  EXPECT_TRUE(ev(sub, c));
}

TEST(Transforms, LToWPairsAreFresh) {
  const LtoWResult w = translate_L_to_W_with_pairs(L("X_l = X"));
  const auto& p = w.pairs.at("X");
  EXPECT_NE(p.left_var, "X_l");
  EXPECT_NE(w.pairs.at("X_l").left_var, p.left_var);
  EXPECT_TRUE(ev(w.formula, [&] {
    WAssignment a = coords("X", F("[0,1]"));
    a[w.pairs.at("X_l").left_var] = S("{0}");
    a[w.pairs.at("X_l").right_var] = S("{1}");
    a.erase("X_l");
    a.erase("X_r");
    a[p.left_var] = S("{0}");
    a[p.right_var] = S("{1}");
    return a;
  }()));
}

TEST(Transforms, LToWRandomQuantifierFree) {
  std::mt19937_64 rng(17);
  const FinSet pts = standard_pool(3);
  const WitnessPool pool{refine(pts), refine(pts).size(), true};
  const auto sets = enum_fcis(pts, 2, true);
  for (int i = 0; i < 25; ++i) {
    const Formula f = random_formula(rng, Sig::L, {"X", "Y"}, 2);
    const LtoWResult w = translate_L_to_W_with_pairs(f);
    for (std::size_t k = 0; k < sets.size(); k += 2)
      for (std::size_t j = 0; j < sets.size(); j += 3) {
        const LAssignment a{{"X", sets[k]}, {"Y", sets[j]}};
        WAssignment c;
        for (const auto& [x, v] : a) {
          if (!w.pairs.count(x)) continue;
          c[w.pairs.at(x).left_var] = left_pts(v);
          c[w.pairs.at(x).right_var] = right_pts(v);
        }
        ASSERT_EQ(eval_bounded(f, a, pool), eval_bounded(w.formula, c, pool)) << print(f) << " at " << sets[k] << ", "
                                                                              << sets[j];
      }
  }
}

TEST(Transforms, PipelineExamples) {
  const Formula g = pipeline(L("X = bot"));
  EXPECT_TRUE(is_existential(g));
  EXPECT_TRUE(ev(g, LAssignment{{"X", F("empty")}}));
  EXPECT_FALSE(ev(g, LAssignment{{"X", F("[0,1]")}}));

  const Formula f = L("l(X) = r(X) & !X = bot");
  const Formula h = pipeline(f);
  EXPECT_TRUE(is_existential(h));
  std::mt19937_64 rng(19);
  for (int i = 0; i < 50; ++i) {
    const LAssignment a{{"X", random_fci(rng, random_points(rng, 6), 3, true)}};
    EXPECT_EQ(ev(f, a), ev(h, a)) << a.at("X");
  }
}

TEST(Transforms, PipelineFragmentErrors) {
  try {
    pipeline(L("A Y. (Y sub X -> Y = X)"));
    FAIL();
  } catch (const FragmentError& e) {
    EXPECT_FALSE(e.var().empty());
    EXPECT_NE(std::string(e.what()).find("quantifier over Y"), std::string::npos);
  }
  for (const auto& text : corpus::pipeline_unsupported()) EXPECT_THROW(pipeline(L(text)), FragmentError) << text;
}

TEST(Transforms, PipelineDeterministic) {
  for (const auto& text : corpus::pipeline_supported()) {
    const Formula g = pipeline(L(text));
    EXPECT_EQ(print(g), print(pipeline(L(text))));
    EXPECT_EQ(print(parse(print(g), Sig::L)), print(g));
    EXPECT_TRUE(free_vars(g) == free_vars(L(text))) << text;
  }
}

TEST(Transforms, CorporaCoverSignatures) {
  auto symbols = [](const std::vector<std::string>& texts, Sig sig) {
    std::set<Symbol> out;
    std::function<void(const Term&)> walk = [&](const Term& t) {
      if (t.is_var()) return;
      out.insert(t.symbol());
      for (const auto& a : t.args()) walk(a);
    };
    std::function<void(const Formula&)> go = [&](const Formula& f) {
      using K = Formula::Kind;
      switch (f.kind()) {
        case K::atom: walk(f.lhs()); walk(f.rhs()); return;
        case K::negation: go(f.child()); return;
        case K::exists:
        case K::forall: go(f.body()); return;
        default: go(f.left()); go(f.right());
      }
    };
    for (const auto& t : texts) go(parse(t, sig));
    return out;
  };
  const std::set<Symbol> w = {Symbol::cup, Symbol::cap, Symbol::bot, Symbol::cz, Symbol::min, Symbol::max, Symbol::ips};
  const std::set<Symbol> l = {Symbol::cup, Symbol::cap, Symbol::bot, Symbol::cz, Symbol::min, Symbol::max, Symbol::l,
                              Symbol::r};
  EXPECT_EQ(symbols(corpus::w_negations(), Sig::W), w);
  EXPECT_EQ(symbols(corpus::w_positive(), Sig::W), w);
  EXPECT_EQ(symbols(corpus::l_formulas(), Sig::L), l);
  EXPECT_GE(corpus::w_negations().size(), 10u);
  EXPECT_GE(corpus::w_positive().size(), 10u);
  EXPECT_GE(corpus::l_formulas().size(), 10u);
}

// Reduced-size runs of the property checks; the acceptance binary runs them at full size.
TEST(Checks, SmallRuns) {
  EXPECT_EQ(checks::notbot().summary(), "checked=32 failures=0");
  EXPECT_TRUE(checks::posex(3).ok());
  EXPECT_TRUE(checks::ipschar(3).ok());
  EXPECT_TRUE(checks::endpoints(4).ok());
  EXPECT_TRUE(checks::member(4).ok());
  EXPECT_TRUE(checks::subset(3).ok());
  EXPECT_TRUE(checks::w2l(3).ok());
  EXPECT_TRUE(checks::pipeline(5, 20).ok());
}
