#pragma once

#include "fairdiv/instance.hpp"
#include "fairdiv/rational.hpp"

#include <stdexcept>
#include <vector>

namespace fairdiv {

// Allocation plus one positive exact price per good. On-MBB outcomes of this
// form are the fPO certificates the solvers emit.
struct MarketOutcome {
  MarketOutcome(Allocation a, RationalVector p)
      : allocation(std::move(a)), prices(std::move(p)) {
    if (prices.size() != allocation.goods())
      throw std::invalid_argument("price vector size mismatch");
    for (Eigen::Index j = 0; j < prices.size(); ++j)
      if (prices(j) <= 0) throw std::invalid_argument("nonpositive price");
  }

  Allocation allocation;
  RationalVector prices;
};

inline Rational bundle_price(const MarketOutcome& outcome, int agent) {
  Rational total = 0;
  for (int j = 0; j < outcome.allocation.goods(); ++j)
    if (outcome.allocation.owner(j) == agent) total += outcome.prices(j);
  return total;
}

inline std::vector<Rational> spending_vector(const MarketOutcome& outcome) {
  std::vector<Rational> s(outcome.allocation.agents(), Rational(0));
  for (int j = 0; j < outcome.allocation.goods(); ++j)
    s[outcome.allocation.owner(j)] += outcome.prices(j);
  return s;
}

// Maximum bang-per-buck structure at the outcome's prices. Goods with zero
// value for an agent are never in her MBB set (alpha is strictly positive
// for validated instances).
struct MBBGraph {
  std::vector<Rational> alpha;         // per agent, max_j v_ij / p_j
  std::vector<std::vector<int>> mbbEdges;  // per agent, argmax goods ascending
  std::vector<int> ownerOf;            // per good

  bool is_mbb(int agent, int good) const {
    for (int j : mbbEdges[agent])
      if (j == good) return true;
    return false;
  }
};

// Generic over the value matrix so the same machinery serves integer
// instances, perturbed rational instances, and rounded PLS values.
template <typename Matrix>
MBBGraph build_mbb_graph_values(const Matrix& values, const MarketOutcome& outcome) {
  const int n = static_cast<int>(values.rows());
  const int m = static_cast<int>(values.cols());
  MBBGraph g;
  g.alpha.assign(n, Rational(0));
  g.mbbEdges.resize(n);
  g.ownerOf.resize(m);
  for (int j = 0; j < m; ++j) g.ownerOf[j] = outcome.allocation.owner(j);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      if (values(i, j) <= 0) continue;
      Rational ratio = Rational(values(i, j)) / outcome.prices(j);
      if (ratio > g.alpha[i]) {
        g.alpha[i] = ratio;
        g.mbbEdges[i].clear();
        g.mbbEdges[i].push_back(j);
      } else if (ratio == g.alpha[i]) {
        g.mbbEdges[i].push_back(j);
      }
    }
  }
  return g;
}

inline MBBGraph build_mbb_graph(const Instance& inst, const MarketOutcome& outcome) {
  return build_mbb_graph_values(inst.values(), outcome);
}

template <typename Matrix>
bool is_on_mbb_values(const Matrix& values, const MarketOutcome& outcome) {
  MBBGraph g = build_mbb_graph_values(values, outcome);
  for (int j = 0; j < static_cast<int>(values.cols()); ++j)
    if (!g.is_mbb(outcome.allocation.owner(j), j)) return false;
  return true;
}

inline bool is_on_mbb(const Instance& inst, const MarketOutcome& outcome) {
  return is_on_mbb_values(inst.values(), outcome);
}

}  // namespace fairdiv
