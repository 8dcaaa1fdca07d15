#pragma once

#include "fairdiv/instance.hpp"
#include "fairdiv/oracles.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

namespace fairdiv {

struct CapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegeneracyUnresolved : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// T_i = all achievable bundle utilities of agent i (subset sums of her row);
// U = max_i |T_i| drives the solver event budgets.
struct UtilityTargets {
  std::vector<std::vector<std::int64_t>> perAgent;  // each sorted ascending
  int U = 0;

  bool achievable(int agent, std::int64_t u) const;
};

UtilityTargets achievable_utilities(const Instance& inst,
                                    std::int64_t tableCap = 10'000'000);

// Goods grouped by identical value columns; label ids follow the
// lexicographic order of the columns.
struct LabelTable {
  int agents = 0;
  std::vector<int> labels;                      // per good
  std::vector<int> counts;                      // per label (m_l)
  ValueMatrix labelValues;                      // n x |L|, v_il
  std::vector<std::vector<int>> goodsOfLabel;   // ascending good indices

  int label_count() const { return static_cast<int>(counts.size()); }
};

LabelTable label_goods(const Instance& inst);

// Searches integer splits m_il of each label's count with
// sum_l m_il v_il = u_i; reconstructs goods within a label in index order.
std::optional<Allocation> feasible_for_target(
    const LabelTable& table, const std::vector<std::int64_t>& targets);

// Constant-(n,k) solvers: enumerate the utility-target product set, keep
// feasible vectors, optimize the objective.
MnwResult solve_constant_nk_mnw(const Instance& inst);
LeximinResult solve_constant_nk_leximin(const Instance& inst);
std::optional<Allocation> solve_constant_nk_satisfying(
    const Instance& inst, const std::function<bool(const Allocation&)>& predicate);

// Base instance plus small rational perturbations that make every
// bang-per-buck comparison strict (non-degenerate at desk scale).
struct PerturbedInstance {
  ValueMatrix base;
  RationalMatrix deltas;
  RationalMatrix values;  // v'_ij = v_ij + delta_ij, 0 kept at 0
  Rational deltaBar;      // the perturbation seed actually used
  Rational maxDelta;
};

PerturbedInstance perturb_instance(const Instance& inst,
                                   const Rational& seedScale = Rational(1),
                                   int retryBudget = 20);

struct ConstantNResult {
  Allocation allocation;
  Verdict ef1OnBase;
  Verdict poOnBase;
  bool usedMarketPath = false;  // integerize-and-run-Algorithm-1 path
};

// Perturb, find an EF1+fPO allocation for the perturbed instance, return it
// with oracle verdicts on the base instance.
ConstantNResult solve_constant_n_ef1_po(const Instance& inst);

// Exposed for tests: the perturbed-instance solve step on its own.
Allocation solve_perturbed_ef1_fpo(const PerturbedInstance& perturbed,
                                   std::int64_t integerizedVmaxCap = 1'000'000,
                                   bool* usedMarketPath = nullptr);

}  // namespace fairdiv
