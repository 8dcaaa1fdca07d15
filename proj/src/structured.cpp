#include "fairdiv/structured.hpp"

#include "fairdiv/market.hpp"
#include "fairdiv/solver.hpp"

#include <algorithm>
#include <numeric>

namespace fairdiv {

bool UtilityTargets::achievable(int agent, std::int64_t u) const {
  const auto& t = perAgent[agent];
  return std::binary_search(t.begin(), t.end(), u);
}

UtilityTargets achievable_utilities(const Instance& inst, std::int64_t tableCap) {
  UtilityTargets targets;
  targets.perAgent.resize(inst.n());
  for (int i = 0; i < inst.n(); ++i) {
    std::int64_t total = 0;
    for (int j = 0; j < inst.m(); ++j) total += inst.value(i, j);
    if (total + 1 > tableCap)
      throw CapExceeded("subset-sum table over memory cap");
    std::vector<bool> reachable(total + 1, false);
    reachable[0] = true;
    for (int j = 0; j < inst.m(); ++j) {
      const std::int64_t v = inst.value(i, j);
      if (v == 0) continue;
      for (std::int64_t s = total; s >= v; --s)
        if (reachable[s - v]) reachable[s] = true;
    }
    for (std::int64_t s = 0; s <= total; ++s)
      if (reachable[s]) targets.perAgent[i].push_back(s);
    targets.U = std::max(targets.U, static_cast<int>(targets.perAgent[i].size()));
  }
  return targets;
}

LabelTable label_goods(const Instance& inst) {
  const int n = inst.n();
  const int m = inst.m();
  std::vector<std::vector<std::int64_t>> columns(m, std::vector<std::int64_t>(n));
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < n; ++i) columns[j][i] = inst.value(i, j);

  std::vector<std::vector<std::int64_t>> distinct = columns;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

  LabelTable table;
  table.agents = n;
  table.labels.resize(m);
  table.counts.assign(distinct.size(), 0);
  table.goodsOfLabel.resize(distinct.size());
  table.labelValues = ValueMatrix(n, distinct.size());
  for (std::size_t l = 0; l < distinct.size(); ++l)
    for (int i = 0; i < n; ++i) table.labelValues(i, static_cast<int>(l)) = distinct[l][i];
  for (int j = 0; j < m; ++j) {
    int l = static_cast<int>(
        std::lower_bound(distinct.begin(), distinct.end(), columns[j]) - distinct.begin());
    table.labels[j] = l;
    table.counts[l] += 1;
    table.goodsOfLabel[l].push_back(j);
  }
  return table;
}

namespace {

// DFS over labels; for each label, enumerate how many of its goods each agent
// takes. Prunes on overshoot and on unreachable remaining demand.
bool assign_labels(const LabelTable& table, const std::vector<std::int64_t>& targets,
                   int label, std::vector<std::int64_t>& remaining,
                   std::vector<std::vector<int>>& split) {
  const int n = table.agents;
  const int L = table.label_count();
  if (label == L) {
    for (int i = 0; i < n; ++i)
      if (remaining[i] != 0) return false;
    return true;
  }
  // Max utility still collectable from labels >= label, per agent.
  // (Recomputed per call; label counts are tiny at desk scale.)
  std::vector<int> take(n, 0);
  std::function<bool(int, int)> place = [&](int agent, int left) -> bool {
    if (agent == n - 1) {
      take[agent] = left;
      std::int64_t v = table.labelValues(agent, label);
      if (v * left > remaining[agent]) return false;
      bool feasible;
      std::vector<std::int64_t> saved = remaining;
      for (int i = 0; i < n; ++i)
        remaining[i] -= table.labelValues(i, label) * take[i];
      split.push_back(take);
      feasible = assign_labels(table, targets, label + 1, remaining, split);
      if (!feasible) {
        split.pop_back();
        remaining = saved;
      }
      return feasible;
    }
    std::int64_t v = table.labelValues(agent, label);
    for (int c = 0; c <= left; ++c) {
      if (v * c > remaining[agent]) break;
      take[agent] = c;
      if (place(agent + 1, left - c)) return true;
    }
    return false;
  };
  return place(0, table.counts[label]);
}

}  // namespace

std::optional<Allocation> feasible_for_target(
    const LabelTable& table, const std::vector<std::int64_t>& targets) {
  const int n = table.agents;
  std::vector<std::int64_t> remaining = targets;
  for (std::int64_t t : remaining)
    if (t < 0) return std::nullopt;
  std::vector<std::vector<int>> split;
  if (!assign_labels(table, targets, 0, remaining, split)) return std::nullopt;

  int m = 0;
  for (int c : table.counts) m += c;
  std::vector<int> owner(m, 0);
  for (int l = 0; l < table.label_count(); ++l) {
    std::size_t next = 0;
    for (int i = 0; i < n; ++i)
      for (int c = 0; c < split[l][i]; ++c) owner[table.goodsOfLabel[l][next++]] = i;
  }
  return Allocation(n, owner);
}

namespace {

// Enumerates the utility-target product set T_1 x ... x T_n in ascending
// lexicographic order.
template <typename Fn>
void for_each_target_vector(const UtilityTargets& targets, Fn&& fn) {
  const int n = static_cast<int>(targets.perAgent.size());
  std::vector<std::size_t> idx(n, 0);
  std::vector<std::int64_t> u(n);
  while (true) {
    for (int i = 0; i < n; ++i) u[i] = targets.perAgent[i][idx[i]];
    fn(u);
    int i = n - 1;
    while (i >= 0 && idx[i] + 1 == targets.perAgent[i].size()) idx[i--] = 0;
    if (i < 0) break;
    ++idx[i];
  }
}

void check_product_cap(const UtilityTargets& targets) {
  std::int64_t count = 1;
  for (const auto& t : targets.perAgent) {
    count *= static_cast<std::int64_t>(t.size());
    if (count > enumeration_cap())
      throw CapExceeded("utility-target product set over cap");
  }
}

}  // namespace

MnwResult solve_constant_nk_mnw(const Instance& inst) {
  UtilityTargets targets = achievable_utilities(inst);
  check_product_cap(targets);
  LabelTable table = label_goods(inst);
  std::optional<MnwResult> best;
  for_each_target_vector(targets, [&](const std::vector<std::int64_t>& u) {
    MnwScore score = MnwScore::of(u);
    if (best && !score.better_than(best->score)) return;
    if (auto alloc = feasible_for_target(table, u))
      best = MnwResult{std::move(*alloc), std::move(score)};
  });
  if (!best) throw std::logic_error("no feasible utility vector");
  return *best;
}

LeximinResult solve_constant_nk_leximin(const Instance& inst) {
  UtilityTargets targets = achievable_utilities(inst);
  check_product_cap(targets);
  LabelTable table = label_goods(inst);
  std::optional<LeximinResult> best;
  for_each_target_vector(targets, [&](const std::vector<std::int64_t>& u) {
    std::vector<std::int64_t> sorted = u;
    std::sort(sorted.begin(), sorted.end());
    if (best && !std::lexicographical_compare(best->sortedUtilities.begin(),
                                              best->sortedUtilities.end(),
                                              sorted.begin(), sorted.end()))
      return;
    if (auto alloc = feasible_for_target(table, u))
      best = LeximinResult{std::move(*alloc), std::move(sorted)};
  });
  if (!best) throw std::logic_error("no feasible utility vector");
  return *best;
}

std::optional<Allocation> solve_constant_nk_satisfying(
    const Instance& inst, const std::function<bool(const Allocation&)>& predicate) {
  UtilityTargets targets = achievable_utilities(inst);
  check_product_cap(targets);
  LabelTable table = label_goods(inst);
  std::optional<Allocation> found;
  for_each_target_vector(targets, [&](const std::vector<std::int64_t>& u) {
    if (found) return;
    if (auto alloc = feasible_for_target(table, u))
      if (predicate(*alloc)) found = std::move(alloc);
  });
  return found;
}

PerturbedInstance perturb_instance(const Instance& inst, const Rational& seedScale,
                                   int retryBudget) {
  const int n = inst.n();
  const int m = inst.m();
  const std::int64_t vmax = inst.vmax();

  Rational deltaBar =
      seedScale / Rational(4 * m * m * vmax * (static_cast<std::int64_t>(n) * m + m + 1));

  for (int attempt = 0; attempt <= retryBudget; ++attempt, deltaBar /= 2) {
    PerturbedInstance p;
    p.base = inst.values();
    p.deltas = RationalMatrix::Constant(n, m, Rational(0));
    p.values = RationalMatrix::Constant(n, m, Rational(0));
    p.deltaBar = deltaBar;
    p.maxDelta = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < m; ++j) {
        if (inst.value(i, j) == 0) continue;
        Rational d = rational_pow(deltaBar, static_cast<unsigned long>((i + 1) * n)) +
                     rational_pow(deltaBar, static_cast<unsigned long>(j + 1));
        p.deltas(i, j) = d;
        p.values(i, j) = Rational(inst.value(i, j)) + d;
        p.maxDelta = std::max(p.maxDelta, d);
      }
    }
    // Non-degeneracy at desk scale: all 2x2 value minors over positive cells
    // are nonzero, so no two bang-per-buck comparisons can tie.
    bool degenerate = false;
    for (int i = 0; i < n && !degenerate; ++i)
      for (int h = i + 1; h < n && !degenerate; ++h)
        for (int j = 0; j < m && !degenerate; ++j)
          for (int jj = j + 1; jj < m && !degenerate; ++jj) {
            if (p.values(i, j) == 0 || p.values(i, jj) == 0 ||
                p.values(h, j) == 0 || p.values(h, jj) == 0)
              continue;
            if (p.values(i, j) * p.values(h, jj) == p.values(i, jj) * p.values(h, j))
              degenerate = true;
          }
    if (!degenerate) return p;
  }
  throw DegeneracyUnresolved("perturbation retries exhausted");
}

Allocation solve_perturbed_ef1_fpo(const PerturbedInstance& perturbed,
                                   std::int64_t integerizedVmaxCap,
                                   bool* usedMarketPath) {
  const int n = static_cast<int>(perturbed.values.rows());
  const int m = static_cast<int>(perturbed.values.cols());

  // Path (a): clear denominators and run the market solver when the scaled
  // values stay desk-sized.
  Integer commonDen = 1;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j)
      mpz_lcm(commonDen.get_mpz_t(), commonDen.get_mpz_t(),
              perturbed.values(i, j).get_den().get_mpz_t());
  Integer scaledMax = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) {
      Integer scaled = perturbed.values(i, j).get_num() *
                       (commonDen / perturbed.values(i, j).get_den());
      scaledMax = std::max(scaledMax, scaled);
    }
  if (scaledMax <= integerizedVmaxCap) {
    ValueMatrix intValues(n, m);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) {
        Integer scaled = perturbed.values(i, j).get_num() *
                         (commonDen / perturbed.values(i, j).get_den());
        intValues(i, j) = scaled.get_si();
      }
    SolveResult result = solve_ef1_fpo(validate_instance(intValues));
    if (usedMarketPath) *usedMarketPath = true;
    return result.outcome.allocation;
  }

  // Path (b): first allocation that is EF1, undominated integrally, and fPO
  // for the perturbed values. Utility vectors are precomputed once so the
  // dominance scan stays quadratic in the allocation count.
  if (usedMarketPath) *usedMarketPath = false;
  if (allocation_count(n, m) > enumeration_cap())
    throw CapExceeded("perturbed brute force: n^m over cap");

  std::vector<Allocation> all;
  std::vector<std::vector<Rational>> utils;
  for_each_allocation(n, m, [&](const Allocation& a) {
    std::vector<Rational> u(n, Rational(0));
    for (int j = 0; j < m; ++j) u[a.owner(j)] += perturbed.values(a.owner(j), j);
    all.push_back(a);
    utils.push_back(std::move(u));
  });

  auto dominated = [&](std::size_t idx) {
    for (std::size_t other = 0; other < all.size(); ++other) {
      bool geAll = true, gtSome = false;
      for (int i = 0; i < n; ++i) {
        if (utils[other][i] < utils[idx][i]) {
          geAll = false;
          break;
        }
        if (utils[other][i] > utils[idx][i]) gtSome = true;
      }
      if (geAll && gtSome) return true;
    }
    return false;
  };

  for (std::size_t idx = 0; idx < all.size(); ++idx) {
    if (!check_ef1_values(perturbed.values, all[idx]).holds) continue;
    if (dominated(idx)) continue;
    if (check_fpo_lp_values(perturbed.values, all[idx]).holds) return all[idx];
  }
  throw std::logic_error("no EF1+fPO allocation found for perturbed instance");
}

ConstantNResult solve_constant_n_ef1_po(const Instance& inst) {
  PerturbedInstance perturbed = perturb_instance(inst);
  bool usedMarketPath = false;
  Allocation alloc = solve_perturbed_ef1_fpo(perturbed, 1'000'000, &usedMarketPath);
  return ConstantNResult{alloc, check_ef1(inst, alloc), check_po_bruteforce(inst, alloc),
                         usedMarketPath};
}

}  // namespace fairdiv
