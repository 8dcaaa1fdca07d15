#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "fairdiv/io.hpp"
#include "fairdiv/oracles.hpp"
#include "fairdiv/pls.hpp"

using namespace fairdiv;

namespace {

Rational coarse_epsilon(const Instance& inst) {
  const std::int64_t target = 4 * inst.m() * inst.vmax();
  Integer denom = 1;
  while (denom < target) denom *= 2;
  return Rational(Integer(1), denom);
}

}  // namespace

TEST_CASE("rounding to powers of (1+eps): frozen example") {
  // v = 10, eps = 1/2: (3/2)^5 = 243/32 <= 10 < (3/2)^6
  Instance inst = instance_from_rows({{10, 1}, {1, 10}});
  EpsilonScheme scheme = EpsilonScheme::test_mode(inst, make_rational(1, 2));
  RoundedValues r = round_valuations(inst, scheme);
  REQUIRE(r.exponent[0][0].has_value());
  CHECK(*r.exponent[0][0] == 5);
  CHECK(r.values(0, 0) == make_rational(243, 32));
  CHECK(*r.exponent[0][1] == 0);
  CHECK(r.values(0, 1) == 1);
}

TEST_CASE("rounded values never exceed the originals") {
  std::mt19937_64 rng(59);
  for (int trial = 0; trial < 30; ++trial) {
    Instance inst = generate(Family::Random, 2 + rng() % 2, 2 + rng() % 4,
                             1 + rng() % 10, 13000 + trial);
    EpsilonScheme scheme = EpsilonScheme::test_mode(inst, coarse_epsilon(inst));
    RoundedValues r = round_valuations(inst, scheme);
    for (int i = 0; i < inst.n(); ++i)
      for (int j = 0; j < inst.m(); ++j) {
        if (inst.value(i, j) == 0) {
          CHECK_FALSE(r.exponent[i][j].has_value());
          continue;
        }
        CHECK(r.values(i, j) <= inst.value(i, j));
        CHECK(r.values(i, j) * scheme.one_plus_eps() > inst.value(i, j));
      }
  }
}

TEST_CASE("epsilon schemes bound the price grid") {
  Instance inst = instance_from_rows({{3, 1}, {1, 3}});
  EpsilonScheme test = EpsilonScheme::test_mode(inst, make_rational(1, 2));
  // pmax must reach 2 m^2 vmax^3 = 2*4*27 = 216
  CHECK(test.pmax() >= 216);
  CHECK(rational_pow(test.one_plus_eps(),
                     static_cast<unsigned long>(test.maxExponent - 1)) < 216);

  EpsilonScheme paper = EpsilonScheme::paper_mode(inst);
  CHECK(paper.epsilon == make_rational(1, 12 * 8 * 81));
  CHECK(paper.pmax() >= 216);
  CHECK_THROWS(EpsilonScheme::test_mode(inst, Rational(0)));
}

TEST_CASE("initial configuration is valid; invalid configs cost bottom") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 25; ++trial) {
    Instance inst = generate(Family::Random, 2 + rng() % 2, 2 + rng() % 3,
                             1 + rng() % 8, 14000 + trial);
    EpsilonScheme scheme = EpsilonScheme::test_mode(inst, coarse_epsilon(inst));
    Configuration init = initial_configuration(inst, scheme);
    CHECK(is_valid_configuration(inst, scheme, init));
    CHECK_FALSE(config_cost(inst, scheme, init).is_bottom());

    Configuration broken = init;
    broken.exponents[0] = scheme.maxExponent + 1;
    CHECK_FALSE(is_valid_configuration(inst, scheme, broken));
    CHECK(config_cost(inst, scheme, broken).is_bottom());
    CHECK(config_cost(inst, scheme, broken) < config_cost(inst, scheme, init));

    // the neighbor of an invalid configuration is the canonical start
    Configuration repaired = neighbor_D(inst, scheme, broken);
    CHECK(repaired.allocation == init.allocation);
    CHECK(repaired.exponents == init.exponents);
  }
}

TEST_CASE("every neighbor step strictly improves the lexicographic cost") {
  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 40; ++trial) {
    Instance inst = generate(Family::Random, 2 + rng() % 2, 2 + rng() % 4,
                             1 + rng() % 8, 15000 + trial);
    EpsilonScheme scheme = EpsilonScheme::test_mode(inst, coarse_epsilon(inst));
    Configuration cfg = initial_configuration(inst, scheme);
    for (int step = 0; step < 10000; ++step) {
      LexCost before = config_cost(inst, scheme, cfg);
      Configuration next = neighbor_D(inst, scheme, cfg);
      LexCost after = config_cost(inst, scheme, next);
      if (before.delta == 1) {
        // fixpoint: D is the identity there
        CHECK(next.allocation == cfg.allocation);
        CHECK(next.exponents == cfg.exponents);
        break;
      }
      CHECK(before < after);
      cfg = next;
    }
    CHECK(config_cost(inst, scheme, cfg).delta == 1);
  }
}

TEST_CASE("local search fixpoints are EF1 and PO on the original values") {
  std::mt19937_64 rng(71);
  const Family families[] = {Family::Random, Family::Binary, Family::Positive};
  for (int trial = 0; trial < 40; ++trial) {
    int n = 2 + static_cast<int>(rng() % 2);
    int m = 2 + static_cast<int>(rng() % 4);
    Instance inst =
        generate(families[trial % 3], n, m, 1 + rng() % 8, 16000 + trial);
    EpsilonScheme scheme = EpsilonScheme::test_mode(inst, coarse_epsilon(inst));
    LocalSearchResult r = local_search(inst, scheme);
    CHECK(is_valid_configuration(inst, scheme, r.fixpoint));
    CHECK(config_cost(inst, scheme, r.fixpoint).delta == 1);
    CHECK(check_ef1(inst, r.fixpoint.allocation).holds);
    CHECK(check_po_bruteforce(inst, r.fixpoint.allocation).holds);
  }
}
