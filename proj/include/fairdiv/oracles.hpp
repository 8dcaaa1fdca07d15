#pragma once

#include "fairdiv/instance.hpp"
#include "fairdiv/market.hpp"
#include "fairdiv/simplex.hpp"

#include <cstdint>
#include <cstdlib>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fairdiv {

struct InstanceTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Enumeration cap for brute-force oracles: allocations enumerated only while
// n^m stays below this. Overridable via FAIRDIV_ENUM_CAP.
inline std::int64_t enumeration_cap() {
  if (const char* env = std::getenv("FAIRDIV_ENUM_CAP")) return std::atoll(env);
  return 2'000'000;
}

// Cap on n*m for the exact-LP fPO check. Overridable via FAIRDIV_LP_CAP.
inline int lp_cap() {
  if (const char* env = std::getenv("FAIRDIV_LP_CAP")) return std::atoi(env);
  return 400;
}

inline std::int64_t allocation_count(int n, int m) {
  std::int64_t count = 1;
  for (int j = 0; j < m; ++j) {
    if (count > enumeration_cap() / n + 1) return enumeration_cap() + 1;
    count *= n;
  }
  return count;
}

// Visits all n^m owner vectors in lexicographic order.
template <typename Fn>
void for_each_allocation(int n, int m, Fn&& fn) {
  std::vector<int> owner(m, 0);
  while (true) {
    fn(Allocation(n, owner));
    int j = m - 1;
    while (j >= 0 && owner[j] == n - 1) owner[j--] = 0;
    if (j < 0) break;
    ++owner[j];
  }
}

struct Verdict {
  struct Witness {
    int agentI = -1;  // the dissatisfied agent
    int agentH = -1;  // the compared agent
    std::optional<Allocation> dominating;       // PO/fPO integral witness
    std::optional<RationalMatrix> fractional;   // fPO fractional witness
  };

  bool holds = true;
  std::optional<Witness> witness;

  static Verdict ok() { return Verdict{}; }
  static Verdict fail(Witness w) { return Verdict{false, std::move(w)}; }
};

// EF1 over an arbitrary (possibly rational) value matrix; pairs against an
// empty bundle hold vacuously.
template <typename Matrix>
Verdict check_ef1_values(const Matrix& values, const Allocation& alloc) {
  const int n = static_cast<int>(values.rows());
  const int m = static_cast<int>(values.cols());
  for (int i = 0; i < n; ++i) {
    Rational own = 0;
    for (int j = 0; j < m; ++j)
      if (alloc.owner(j) == i) own += Rational(values(i, j));
    for (int h = 0; h < n; ++h) {
      if (h == i || alloc.bundle_size(h) == 0) continue;
      Rational other = 0;
      Rational bestRemoval = -1;
      for (int j = 0; j < m; ++j) {
        if (alloc.owner(j) != h) continue;
        other += Rational(values(i, j));
        if (Rational(values(i, j)) > bestRemoval) bestRemoval = Rational(values(i, j));
      }
      if (own < other - bestRemoval)
        return Verdict::fail({i, h, std::nullopt, std::nullopt});
    }
  }
  return Verdict::ok();
}

inline Verdict check_ef1(const Instance& inst, const Allocation& alloc) {
  return check_ef1_values(inst.values(), alloc);
}

template <typename Matrix>
Verdict check_eq1_values(const Matrix& values, const Allocation& alloc) {
  const int n = static_cast<int>(values.rows());
  const int m = static_cast<int>(values.cols());
  std::vector<Rational> own(n, Rational(0));
  for (int j = 0; j < m; ++j)
    own[alloc.owner(j)] += Rational(values(alloc.owner(j), j));
  for (int h = 0; h < n; ++h) {
    if (alloc.bundle_size(h) == 0) continue;
    Rational bestRemoval = -1;  // h's most valuable own good, by h's values
    for (int j = 0; j < m; ++j) {
      if (alloc.owner(j) != h) continue;
      if (Rational(values(h, j)) > bestRemoval) bestRemoval = Rational(values(h, j));
    }
    for (int i = 0; i < n; ++i) {
      if (i == h) continue;
      if (own[i] < own[h] - bestRemoval)
        return Verdict::fail({i, h, std::nullopt, std::nullopt});
    }
  }
  return Verdict::ok();
}

inline Verdict check_eq1(const Instance& inst, const Allocation& alloc) {
  return check_eq1_values(inst.values(), alloc);
}

// (1+eps) * p(x_i) >= p(x_h \ {j}) for some j in x_h, all pairs; eps = 0 is
// plain pEF1.
inline Verdict check_pef1(const MarketOutcome& outcome,
                          const Rational& epsilon = Rational(0)) {
  const int n = outcome.allocation.agents();
  const int m = outcome.allocation.goods();
  std::vector<Rational> spend = spending_vector(outcome);
  for (int h = 0; h < n; ++h) {
    if (outcome.allocation.bundle_size(h) == 0) continue;
    Rational dearest = 0;
    for (int j = 0; j < m; ++j)
      if (outcome.allocation.owner(j) == h && outcome.prices(j) > dearest)
        dearest = outcome.prices(j);
    for (int i = 0; i < n; ++i) {
      if (i == h) continue;
      if ((1 + epsilon) * spend[i] < spend[h] - dearest)
        return Verdict::fail({i, h, std::nullopt, std::nullopt});
    }
  }
  return Verdict::ok();
}

template <typename Matrix>
Verdict check_po_bruteforce_values(const Matrix& values, const Allocation& alloc) {
  const int n = static_cast<int>(values.rows());
  const int m = static_cast<int>(values.cols());
  if (allocation_count(n, m) > enumeration_cap())
    throw InstanceTooLarge("PO brute force: n^m over cap");
  std::vector<Rational> base(n, Rational(0));
  for (int j = 0; j < m; ++j)
    base[alloc.owner(j)] += Rational(values(alloc.owner(j), j));
  std::optional<Allocation> dominating;
  for_each_allocation(n, m, [&](const Allocation& other) {
    if (dominating) return;
    bool geAll = true, gtSome = false;
    std::vector<Rational> u(n, Rational(0));
    for (int j = 0; j < m; ++j)
      u[other.owner(j)] += Rational(values(other.owner(j), j));
    for (int i = 0; i < n; ++i) {
      if (u[i] < base[i]) {
        geAll = false;
        break;
      }
      if (u[i] > base[i]) gtSome = true;
    }
    if (geAll && gtSome) dominating = other;
  });
  if (dominating)
    return Verdict::fail({-1, -1, dominating, std::nullopt});
  return Verdict::ok();
}

inline Verdict check_po_bruteforce(const Instance& inst, const Allocation& alloc) {
  return check_po_bruteforce_values(inst.values(), alloc);
}

// fPO via an exact LP: does any fractional allocation weakly dominate with
// slack? Variables y_ij >= 0, sum_i y_ij <= 1 per good (free disposal),
// sum_j v_ij y_ij >= v_i(x_i) per agent; fPO iff max total surplus is 0.
template <typename Matrix>
Verdict check_fpo_lp_values(const Matrix& values, const Allocation& alloc) {
  const int n = static_cast<int>(values.rows());
  const int m = static_cast<int>(values.cols());
  if (n * m > lp_cap()) throw InstanceTooLarge("fPO LP: n*m over cap");

  std::vector<Rational> base(n, Rational(0));
  for (int j = 0; j < m; ++j)
    base[alloc.owner(j)] += Rational(values(alloc.owner(j), j));

  LinearProgram lp;
  const int vars = n * m;
  lp.A = RationalMatrix::Constant(m + n, vars, Rational(0));
  lp.b = RationalVector::Constant(m + n, Rational(0));
  lp.c = RationalVector::Constant(vars, Rational(0));
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < n; ++i) lp.A(j, i * m + j) = 1;
    lp.b(j) = 1;
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) lp.A(m + i, i * m + j) = -Rational(values(i, j));
    lp.b(m + i) = -base[i];
  }
  Rational baseTotal = 0;
  for (int i = 0; i < n; ++i) {
    baseTotal += base[i];
    for (int j = 0; j < m; ++j) lp.c(i * m + j) = Rational(values(i, j));
  }

  LpResult res = solve_lp(lp);
  if (res.status != LpStatus::Optimal)
    throw std::logic_error("fPO LP must be feasible and bounded");
  if (res.objective == baseTotal) return Verdict::ok();
  RationalMatrix y(n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) y(i, j) = res.solution(i * m + j);
  return Verdict::fail({-1, -1, std::nullopt, y});
}

inline Verdict check_fpo_lp(const Instance& inst, const Allocation& alloc) {
  return check_fpo_lp_values(inst.values(), alloc);
}

// Product of utilities (not the n-th root; argmax is the same).
inline Rational nash_welfare(const Instance& inst, const Allocation& alloc) {
  Rational product = 1;
  for (int i = 0; i < inst.n(); ++i) product *= Rational(utility(inst, alloc, i));
  return product;
}

// Comparison key for MNW with the degenerate-product convention: product
// first; among all-zero products, more agents with positive utility, then
// the product restricted to those agents.
struct MnwScore {
  Integer product = 1;
  int positiveCount = 0;
  Integer positiveProduct = 1;

  static MnwScore of(const std::vector<std::int64_t>& utilities) {
    MnwScore s;
    for (std::int64_t u : utilities) {
      s.product *= u;
      if (u > 0) {
        ++s.positiveCount;
        s.positiveProduct *= u;
      }
    }
    return s;
  }

  bool better_than(const MnwScore& o) const {
    if (product != o.product) return product > o.product;
    if (positiveCount != o.positiveCount) return positiveCount > o.positiveCount;
    return positiveProduct > o.positiveProduct;
  }
  bool operator==(const MnwScore& o) const = default;
};

struct MnwResult {
  Allocation allocation;
  MnwScore score;
};

struct LeximinResult {
  Allocation allocation;
  std::vector<std::int64_t> sortedUtilities;  // ascending
};

MnwResult bruteforce_mnw(const Instance& inst);
LeximinResult bruteforce_leximin(const Instance& inst);

struct NotFound : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// First allocation (lexicographic owner-vector order) satisfying the
// caller-supplied checkable property.
std::optional<Allocation> bruteforce_satisfying(
    const Instance& inst, const std::function<bool(const Allocation&)>& predicate);

}  // namespace fairdiv
