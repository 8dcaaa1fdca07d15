#pragma once

#include "fairdiv/rational.hpp"

namespace fairdiv {

// max c^T x subject to A x <= b, x >= 0. b may have negative entries.
struct LinearProgram {
  RationalMatrix A;
  RationalVector b;
  RationalVector c;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status;
  Rational objective;       // valid for Optimal
  RationalVector solution;  // valid for Optimal
};

// Exact two-phase dense simplex with Bland's rule. Intended for desk-scale
// programs (tens of variables); every pivot is exact rational arithmetic.
LpResult solve_lp(const LinearProgram& lp);

}  // namespace fairdiv
