#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "fairdiv/io.hpp"
#include "fairdiv/oracles.hpp"
#include "fairdiv/solver.hpp"

using namespace fairdiv;

namespace {

const Instance kE1 = instance_from_rows({{2, 1, 3}, {1, 2, 1}});

}  // namespace

TEST_CASE("initial outcome: welfare-max assignment at owner prices") {
  MarketOutcome o = initial_outcome(kE1);
  CHECK(o.allocation == Allocation(2, {0, 1, 0}));
  CHECK(o.prices(0) == 2);
  CHECK(o.prices(1) == 2);
  CHECK(o.prices(2) == 3);
  CHECK(is_on_mbb(kE1, o));

  // value ties go to the lowest agent index
  Instance tie = instance_from_rows({{3, 1}, {3, 2}});
  CHECK(initial_outcome(tie).allocation.owner(0) == 0);
}

TEST_CASE("price-rise factors on a frozen example") {
  // agent 0 spends 4, agent 1 spends 16; component of the least spender is
  // ({0}, {g0}); gamma1 = 8 (edge to g1 or g2), gamma2 = 16/4 = 4.
  Instance inst = instance_from_rows({{4, 1, 1}, {1, 8, 8}});
  MarketOutcome o = initial_outcome(inst);
  CHECK(o.allocation == Allocation(2, {0, 1, 1}));
  MBBGraph g = build_mbb_graph(inst, o);
  Component c = component_of(o, g, least_spenders(o));
  CHECK(c.agents == std::vector<int>{0});
  CHECK(c.goods == std::vector<int>{0});

  PriceRiseFactors f = price_rise_factors(inst, o, c, RiseMode::WithGamma2);
  REQUIRE(f.gamma1.has_value());
  CHECK(*f.gamma1 == 8);
  REQUIRE(f.gamma2.has_value());
  CHECK(*f.gamma2 == 4);
  CHECK(f.beta == 4);

  MarketOutcome risen = apply_price_rise(o, c, f.beta);
  CHECK(risen.prices(0) == 16);
  CHECK(risen.prices(1) == 8);
  CHECK(risen.prices(2) == 8);
  CHECK(is_on_mbb(inst, risen));  // rises never break MBB membership inside C

  PriceRiseFactors g1only = price_rise_factors(inst, o, c, RiseMode::Gamma1Only);
  CHECK(g1only.beta == 8);
}

TEST_CASE("gamma2 is skipped when the least spender spends nothing") {
  // agent 1 owns nothing; raising component prices can never equalize to 0,
  // so only gamma1 is finite.
  Instance inst = instance_from_rows({{4, 1}, {2, 1}, {1, 4}});
  RationalVector p(2);
  p << Rational(4), Rational(4);
  MarketOutcome o(Allocation(3, {0, 2}), p);
  MBBGraph g = build_mbb_graph(inst, o);
  CHECK(least_spenders(o) == std::vector<int>{1});
  Component c = component_of(o, g, {1});
  CHECK(c.agents == std::vector<int>{0, 1});
  CHECK(c.goods == std::vector<int>{0});
  PriceRiseFactors f = price_rise_factors(inst, o, c, RiseMode::WithGamma2);
  CHECK_FALSE(f.gamma2.has_value());
  REQUIRE(f.gamma1.has_value());
  CHECK(*f.gamma1 == 2);
  CHECK(f.beta == 2);
}

TEST_CASE("violating path transfer on a dictator start") {
  // identical valuations: initial allocation hands everything to agent 0
  Instance inst = instance_from_rows({{2, 2, 2}, {2, 2, 2}});
  MarketOutcome o = initial_outcome(inst);
  MBBGraph g = build_mbb_graph(inst, o);
  auto path = find_violating_path(inst, o, g, PathMode::SpendingEF1);
  REQUIRE(path.has_value());
  CHECK(path->sender() == 0);
  CHECK(path->receiver() == 1);
  MarketOutcome after = apply_transfer(o, *path);
  CHECK(after.allocation.bundle_size(1) == 1);
}

TEST_CASE("solver on frozen instance needs no events") {
  SolveResult r = solve_ef1_fpo(kE1);
  CHECK(r.outcome.allocation == Allocation(2, {0, 1, 0}));
  CHECK(r.trace.events.empty());
  CHECK(check_pef1(r.outcome).holds);
}

TEST_CASE("EF1 solver outputs pass all oracles on random instances") {
  std::mt19937_64 rng(23);
  const Family families[] = {Family::Random, Family::Binary, Family::Kary,
                             Family::Positive, Family::Identical};
  for (int trial = 0; trial < 120; ++trial) {
    int n = 2 + static_cast<int>(rng() % 3);
    int m = 2 + static_cast<int>(rng() % 5);
    Instance inst =
        generate(families[trial % 5], n, m, 1 + rng() % 10, 5000 + trial);
    SolveResult r = solve_ef1_fpo(inst);
    CHECK(is_on_mbb(inst, r.outcome));
    // pEF1 can be unattainable when zero values isolate a component (the
    // solver then stops at a directly-verified EF1 state); positive
    // instances always finish pEF1.
    if (inst.positive()) CHECK(check_pef1(r.outcome).holds);
    CHECK(check_ef1(inst, r.outcome.allocation).holds);
    CHECK(check_fpo_lp(inst, r.outcome.allocation).holds);
  }
}

TEST_CASE("EQ1 solver outputs pass the oracles on positive instances") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 80; ++trial) {
    int n = 2 + static_cast<int>(rng() % 3);
    int m = 2 + static_cast<int>(rng() % 5);
    Instance inst = generate(Family::Positive, n, m, 1 + rng() % 10, 6000 + trial);
    SolveResult r = solve_eq1_fpo(inst);
    CHECK(is_on_mbb(inst, r.outcome));
    CHECK(check_eq1(inst, r.outcome.allocation).holds);
    CHECK(check_fpo_lp(inst, r.outcome.allocation).holds);
  }
}

TEST_CASE("EQ1 solver rejects instances with zero values") {
  Instance mixed = instance_from_rows({{1, 0}, {1, 1}});
  CHECK_THROWS_AS(solve_eq1_fpo(mixed), NotPositiveInstance);
}

TEST_CASE("trace events carry exact snapshots") {
  std::mt19937_64 rng(31);
  int sawRise = 0;
  for (int trial = 0; trial < 60 || sawRise == 0; ++trial) {
    REQUIRE(trial < 400);
    Instance inst = generate(Family::Random, 2 + rng() % 2, 2 + rng() % 4,
                             1 + rng() % 8, 7000 + trial);
    SolveResult r = solve_ef1_fpo(inst);
    for (const TraceEvent& ev : r.trace.events) {
      REQUIRE(ev.spendingBefore.size() == static_cast<std::size_t>(inst.n()));
      if (ev.kind == TraceEvent::Kind::PriceRise) {
        ++sawRise;
        CHECK(ev.beta > 1);
        CHECK((ev.trigger == TraceEvent::Trigger::Gamma1 ||
               ev.trigger == TraceEvent::Trigger::Gamma2));
        // component spendings get multiplied by exactly beta
        for (int a : ev.componentAgents)
          CHECK(ev.spendingAfter[a] == ev.beta * ev.spendingBefore[a]);
      } else {
        CHECK(ev.good >= 0);
        CHECK(ev.fromAgent != ev.toAgent);
        // the transferred spending moves exactly
        Rational delta = ev.spendingBefore[ev.fromAgent] - ev.spendingAfter[ev.fromAgent];
        CHECK(delta > 0);
        CHECK(ev.spendingAfter[ev.toAgent] - ev.spendingBefore[ev.toAgent] == delta);
      }
    }
  }
}
