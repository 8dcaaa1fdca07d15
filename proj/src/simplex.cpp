#include "fairdiv/simplex.hpp"

#include <stdexcept>
#include <vector>

namespace fairdiv {

namespace {

// Tableau rows are constraints, the last row is the (negated) objective.
// basis[r] holds the variable index basic in row r.
struct Tableau {
  RationalMatrix t;
  std::vector<int> basis;
  int rows;  // constraint rows
  int cols;  // variable columns (excluding rhs)

  Rational& rhs(int r) { return t(r, cols); }
  Rational& obj(int c) { return t(rows, c); }

  void pivot(int pr, int pc) {
    Rational piv = t(pr, pc);
    for (int c = 0; c <= cols; ++c) t(pr, c) /= piv;
    for (int r = 0; r <= rows; ++r) {
      if (r == pr) continue;
      Rational f = t(r, pc);
      if (f == 0) continue;
      for (int c = 0; c <= cols; ++c) t(r, c) -= f * t(pr, c);
    }
    basis[pr] = pc;
  }

  // Bland's rule: entering = lowest-index column with positive reduced cost
  // (we keep the objective row as "maximize", so look for positive entries
  // after negation convention below). Returns false at optimality.
  bool iterate() {
    int pc = -1;
    for (int c = 0; c < cols; ++c) {
      if (t(rows, c) < 0) {
        pc = c;
        break;
      }
    }
    if (pc < 0) return false;
    int pr = -1;
    Rational best;
    for (int r = 0; r < rows; ++r) {
      if (t(r, pc) <= 0) continue;
      Rational ratio = rhs(r) / t(r, pc);
      if (pr < 0 || ratio < best ||
          (ratio == best && basis[r] < basis[pr])) {
        pr = r;
        best = ratio;
      }
    }
    if (pr < 0) throw std::runtime_error("unbounded");
    pivot(pr, pc);
    return true;
  }
};

}  // namespace

LpResult solve_lp(const LinearProgram& lp) {
  const int m = static_cast<int>(lp.A.rows());
  const int n = static_cast<int>(lp.A.cols());

  // Columns: n structural, m slacks, then one artificial per negative-rhs row.
  int artificialCount = 0;
  for (int r = 0; r < m; ++r)
    if (lp.b(r) < 0) ++artificialCount;
  const int cols = n + m + artificialCount;

  Tableau tab;
  tab.rows = m;
  tab.cols = cols;
  tab.t = RationalMatrix::Constant(m + 1, cols + 1, Rational(0));
  tab.basis.assign(m, -1);

  int nextArtificial = n + m;
  for (int r = 0; r < m; ++r) {
    Rational sign = (lp.b(r) < 0) ? Rational(-1) : Rational(1);
    for (int c = 0; c < n; ++c) tab.t(r, c) = sign * lp.A(r, c);
    tab.t(r, n + r) = sign;  // slack
    tab.rhs(r) = sign * lp.b(r);
    if (lp.b(r) < 0) {
      tab.t(r, nextArtificial) = 1;
      tab.basis[r] = nextArtificial++;
    } else {
      tab.basis[r] = n + r;
    }
  }

  if (artificialCount > 0) {
    // Phase 1: minimize the artificial sum; the objective row carries the
    // reduced costs of "maximize -sum(artificials)".
    for (int c = n + m; c < cols; ++c) tab.t(m, c) = 1;
    for (int r = 0; r < m; ++r) {
      if (tab.basis[r] >= n + m) {
        for (int c = 0; c <= cols; ++c) tab.t(m, c) -= tab.t(r, c);
      }
    }
    while (tab.iterate()) {
    }
    if (tab.rhs(m) != 0) {
      return {LpStatus::Infeasible, Rational(0), RationalVector()};
    }
    // Drive any degenerate artificials out of the basis.
    for (int r = 0; r < m; ++r) {
      if (tab.basis[r] < n + m) continue;
      int pc = -1;
      for (int c = 0; c < n + m; ++c) {
        if (tab.t(r, c) != 0) {
          pc = c;
          break;
        }
      }
      if (pc >= 0) tab.pivot(r, pc);
      // else: the row is all-zero over real variables (redundant constraint)
    }
    // Erase artificial columns from further consideration.
    for (int r = 0; r <= m; ++r)
      for (int c = n + m; c < cols; ++c) tab.t(r, c) = 0;
  }

  // Phase 2 objective row: reduced costs of maximize c^T x.
  for (int c = 0; c < cols; ++c) tab.t(m, c) = 0;
  tab.rhs(m) = 0;
  for (int c = 0; c < n; ++c) tab.t(m, c) = -lp.c(c);
  for (int r = 0; r < m; ++r) {
    if (tab.basis[r] < n && lp.c(tab.basis[r]) != 0) {
      Rational f = lp.c(tab.basis[r]);
      for (int c = 0; c <= cols; ++c) tab.t(m, c) += f * tab.t(r, c);
    }
  }

  try {
    while (tab.iterate()) {
    }
  } catch (const std::runtime_error&) {
    return {LpStatus::Unbounded, Rational(0), RationalVector()};
  }

  RationalVector x = RationalVector::Constant(n, Rational(0));
  for (int r = 0; r < m; ++r)
    if (tab.basis[r] < n) x(tab.basis[r]) = tab.rhs(r);
  Rational obj = 0;
  for (int c = 0; c < n; ++c) obj += lp.c(c) * x(c);
  return {LpStatus::Optimal, obj, x};
}

}  // namespace fairdiv
