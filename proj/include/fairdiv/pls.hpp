#pragma once

#include "fairdiv/instance.hpp"
#include "fairdiv/rational.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace fairdiv {

struct StepBudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Grid parameters for the local-search reduction: valuations and prices live
// on integral powers of (1+epsilon).
struct EpsilonScheme {
  Rational epsilon;
  std::int64_t vmax = 1;
  std::int64_t maxExponent = 0;  // prices stay within [1, (1+eps)^maxExponent]

  Rational one_plus_eps() const { return 1 + epsilon; }
  Rational pmax() const;

  // epsilon = 1/(12 m^3 vmax^4); price arithmetic at this setting is only
  // tractable for toy sizes.
  static EpsilonScheme paper_mode(const Instance& inst);
  // Caller-chosen coarser epsilon; fixpoints are re-verified by the exact
  // oracles instead of the epsilon-bound argument.
  static EpsilonScheme test_mode(const Instance& inst, const Rational& epsilon);
};

// v'_ij = largest power of (1+eps) not exceeding v_ij, kept as the exponent;
// zero values stay zero (no exponent).
struct RoundedValues {
  std::vector<std::vector<std::optional<std::int64_t>>> exponent;  // n x m
  RationalMatrix values;
};

RoundedValues round_valuations(const Instance& inst, const EpsilonScheme& scheme);

// Allocation plus per-good price exponents q_j (p_j = (1+eps)^{q_j}).
struct Configuration {
  Allocation allocation;
  std::vector<std::int64_t> exponents;
};

// Lexicographic (delta, min spending); invalid configurations sit at the
// bottom element (-1, -1).
struct LexCost {
  Rational delta = -1;
  Rational minSpending = -1;

  static LexCost bottom() { return LexCost{}; }
  bool is_bottom() const { return delta == -1; }

  bool operator==(const LexCost& o) const = default;
  bool operator<(const LexCost& o) const {
    if (delta != o.delta) return delta < o.delta;
    return minSpending < o.minSpending;
  }
};

bool is_valid_configuration(const Instance& inst, const EpsilonScheme& scheme,
                            const Configuration& config);

Configuration initial_configuration(const Instance& inst, const EpsilonScheme& scheme);

LexCost config_cost(const Instance& inst, const EpsilonScheme& scheme,
                    const Configuration& config);

// The single-neighbor map D: invalid inputs go to the canonical initial
// configuration; valid ones are advanced (transfers, grid price rises) until
// the least spending strictly increases or epsilon-pEF1 holds.
Configuration neighbor_D(const Instance& inst, const EpsilonScheme& scheme,
                         const Configuration& config);

struct WalkStats {
  int steps = 0;  // neighbor_D invocations
  int transfers = 0;
  int priceRises = 0;  // unit grid steps
};

struct LocalSearchResult {
  Configuration fixpoint;
  WalkStats stats;
};

// Iterates neighbor_D from the initial configuration to a fixpoint (an
// epsilon-pEF1 configuration).
LocalSearchResult local_search(const Instance& inst, const EpsilonScheme& scheme);

}  // namespace fairdiv
