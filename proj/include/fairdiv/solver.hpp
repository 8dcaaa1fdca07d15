#pragma once

#include "fairdiv/instance.hpp"
#include "fairdiv/market.hpp"
#include "fairdiv/trace.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace fairdiv {

struct NotPositiveInstance : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Safety valve only; firing indicates an implementation bug, never an input
// problem (the termination bound is a theorem).
struct IterationBudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NoFiniteFactor : std::logic_error {
  using std::logic_error::logic_error;
};

// Closure of the source agents under MBB edges (agent -> her MBB goods) and
// ownership edges (good -> owner). Component goods are all MBB goods of
// component agents, so every owned good of a member is inside.
struct Component {
  std::vector<int> agents;  // ascending
  std::vector<int> goods;   // ascending
  std::vector<int> levels;  // per agent; n if unreachable, 0 for sources

  bool has_agent(int a) const { return levels[a] < static_cast<int>(levels.size()); }
};

// Alternating path i0, j1, i1, ..., j_l, i_l: good j_t is MBB for i_{t-1}
// and owned by i_t; the terminal good moves from the last agent to the
// second-to-last.
struct ViolatingPath {
  std::vector<int> agents;  // length l+1
  std::vector<int> goods;   // length l

  int transfer_good() const { return goods.back(); }
  int sender() const { return agents.back(); }
  int receiver() const { return agents[agents.size() - 2]; }
};

enum class PathMode { SpendingEF1, UtilityEQ1 };
enum class RiseMode { WithGamma2, Gamma1Only };

struct PriceRiseFactors {
  std::optional<Rational> gamma1;  // nullopt = infinite
  std::optional<Rational> gamma2;
  Rational beta;
};

MarketOutcome initial_outcome(const Instance& inst);

std::vector<int> least_spenders(const MarketOutcome& outcome);
std::vector<int> least_utility_agents(const Instance& inst, const Allocation& alloc);

Component component_of(const MarketOutcome& outcome, const MBBGraph& graph,
                       const std::vector<int>& sources);

// Deterministic search: BFS layer order, sources ascending, then
// (agent, good) index order; first terminal violation wins.
std::optional<ViolatingPath> find_violating_path(const Instance& inst,
                                                 const MarketOutcome& outcome,
                                                 const MBBGraph& graph,
                                                 PathMode mode);

MarketOutcome apply_transfer(const MarketOutcome& outcome, const ViolatingPath& path);

PriceRiseFactors price_rise_factors(const Instance& inst, const MarketOutcome& outcome,
                                    const Component& component, RiseMode mode);

MarketOutcome apply_price_rise(const MarketOutcome& outcome, const Component& component,
                               const Rational& beta);

struct SolveResult {
  MarketOutcome outcome;
  TraceLog trace;
};

// Price-rise market solver for EF1+fPO: returned outcome is pEF1 and on MBB.
SolveResult solve_ef1_fpo(const Instance& inst);

// EQ1+fPO variant for positive instances: least-utility sources, utility
// violations, gamma1-only price rises.
SolveResult solve_eq1_fpo(const Instance& inst);

}  // namespace fairdiv
