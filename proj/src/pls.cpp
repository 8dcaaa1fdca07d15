#include "fairdiv/pls.hpp"

#include "fairdiv/oracles.hpp"

#include <algorithm>
#include <map>

namespace fairdiv {

namespace {

// Smallest q with (1+eps)^q >= target. Exact search for coarse epsilon; the
// Bernoulli bound q = ceil((target-1)/eps) otherwise (generous but exact).
std::int64_t exponent_reaching(const Rational& onePlusEps, const Rational& epsilon,
                               const Rational& target) {
  if (epsilon >= Rational(1, 4096)) {
    std::int64_t q = 0;
    Rational p = 1;
    while (p < target) {
      p *= onePlusEps;
      ++q;
    }
    return q;
  }
  Rational q = (target - 1) / epsilon;
  Integer c;
  mpz_cdiv_q(c.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  return c.get_si();
}

Rational price_bound_target(const Instance& inst) {
  const Integer m = inst.m();
  const Integer v = inst.vmax();
  return Rational(2 * m * m * v * v * v);
}

}  // namespace

Rational EpsilonScheme::pmax() const {
  return rational_pow(one_plus_eps(), static_cast<unsigned long>(maxExponent));
}

EpsilonScheme EpsilonScheme::paper_mode(const Instance& inst) {
  EpsilonScheme s;
  const Integer m = inst.m();
  const Integer v = inst.vmax();
  s.epsilon = Rational(1) / Rational(12 * m * m * m * v * v * v * v);
  s.vmax = inst.vmax();
  s.maxExponent = exponent_reaching(s.one_plus_eps(), s.epsilon, price_bound_target(inst));
  return s;
}

EpsilonScheme EpsilonScheme::test_mode(const Instance& inst, const Rational& epsilon) {
  if (epsilon <= 0) throw std::invalid_argument("epsilon must be positive");
  EpsilonScheme s;
  s.epsilon = epsilon;
  s.vmax = inst.vmax();
  s.maxExponent = exponent_reaching(s.one_plus_eps(), s.epsilon, price_bound_target(inst));
  return s;
}

RoundedValues round_valuations(const Instance& inst, const EpsilonScheme& scheme) {
  RoundedValues r;
  r.exponent.assign(inst.n(), std::vector<std::optional<std::int64_t>>(inst.m()));
  r.values = RationalMatrix::Constant(inst.n(), inst.m(), Rational(0));
  const Rational base = scheme.one_plus_eps();
  std::map<std::int64_t, std::pair<std::int64_t, Rational>> cache;  // v -> (exp, power)
  for (int i = 0; i < inst.n(); ++i) {
    for (int j = 0; j < inst.m(); ++j) {
      const std::int64_t v = inst.value(i, j);
      if (v == 0) continue;
      auto it = cache.find(v);
      if (it == cache.end()) {
        std::int64_t e = 0;
        Rational p = 1;
        while (p * base <= v) {
          p *= base;
          ++e;
        }
        it = cache.emplace(v, std::make_pair(e, p)).first;
      }
      r.exponent[i][j] = it->second.first;
      r.values(i, j) = it->second.second;
    }
  }
  return r;
}

namespace {

struct Grid {
  const Instance& inst;
  const EpsilonScheme& scheme;
  RoundedValues rounded;
  mutable std::map<std::int64_t, Rational> powers;

  explicit Grid(const Instance& i, const EpsilonScheme& s)
      : inst(i), scheme(s), rounded(round_valuations(i, s)) {}

  const Rational& power(std::int64_t q) const {
    auto it = powers.find(q);
    if (it == powers.end())
      it = powers.emplace(q, rational_pow(scheme.one_plus_eps(),
                                          static_cast<unsigned long>(q))).first;
    return it->second;
  }

  // Per-agent MBB exponent (max of a_ij - q_j) and argmax good set.
  struct MbbInfo {
    std::vector<std::int64_t> maxExp;       // per agent
    std::vector<std::vector<int>> goods;    // per agent, ascending
  };

  MbbInfo mbb(const std::vector<std::int64_t>& q) const {
    MbbInfo info;
    info.maxExp.assign(inst.n(), 0);
    info.goods.resize(inst.n());
    for (int i = 0; i < inst.n(); ++i) {
      bool seen = false;
      for (int j = 0; j < inst.m(); ++j) {
        if (!rounded.exponent[i][j]) continue;
        std::int64_t e = *rounded.exponent[i][j] - q[j];
        if (!seen || e > info.maxExp[i]) {
          info.maxExp[i] = e;
          info.goods[i].clear();
          info.goods[i].push_back(j);
          seen = true;
        } else if (e == info.maxExp[i]) {
          info.goods[i].push_back(j);
        }
      }
    }
    return info;
  }

  std::vector<Rational> spendings(const Configuration& cfg) const {
    std::vector<Rational> s(inst.n(), Rational(0));
    for (int j = 0; j < inst.m(); ++j)
      s[cfg.allocation.owner(j)] += power(cfg.exponents[j]);
    return s;
  }

  bool eps_pef1(const Configuration& cfg, const std::vector<Rational>& spend) const {
    const Rational slack = scheme.one_plus_eps();
    for (int h = 0; h < inst.n(); ++h) {
      if (cfg.allocation.bundle_size(h) == 0) continue;
      Rational dearest = 0;
      for (int j = 0; j < inst.m(); ++j)
        if (cfg.allocation.owner(j) == h)
          dearest = std::max(dearest, power(cfg.exponents[j]));
      for (int i = 0; i < inst.n(); ++i) {
        if (i == h) continue;
        if (slack * spend[i] < spend[h] - dearest) return false;
      }
    }
    return true;
  }
};

int lex_min_least_spender(const std::vector<Rational>& spend,
                          const std::vector<bool>& skip = {}) {
  int best = -1;
  for (int i = 0; i < static_cast<int>(spend.size()); ++i) {
    if (!skip.empty() && skip[i]) continue;
    if (best == -1 || spend[i] < spend[best]) best = i;
  }
  return best;
}

struct PathHit {
  int good;
  int receiver;
  int sender;
};

// Shortest alternating path from the single least spender whose terminal
// violates p(x_h \ {j}) > (1+eps) p(x_i); ties by (agent, good) index.
std::optional<PathHit> find_violation(const Grid& grid, const Configuration& cfg,
                                      const Grid::MbbInfo& mbb, int source,
                                      const std::vector<Rational>& spend) {
  const int n = grid.inst.n();
  const Rational threshold = grid.scheme.one_plus_eps() * spend[source];
  std::vector<int> level(n, -1);
  level[source] = 0;
  std::vector<int> frontier{source};
  int layer = 0;
  while (!frontier.empty()) {
    std::vector<int> next;
    for (int a : frontier) {
      for (int j : mbb.goods[a]) {
        int h = cfg.allocation.owner(j);
        if (level[h] != -1 && level[h] != layer + 1) continue;
        if (spend[h] - grid.power(cfg.exponents[j]) > threshold)
          return PathHit{j, a, h};
        if (level[h] == -1) {
          level[h] = layer + 1;
          next.push_back(h);
        }
      }
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    frontier = std::move(next);
    ++layer;
  }
  return std::nullopt;
}

struct GridComponent {
  std::vector<bool> agentIn, goodIn;
};

GridComponent component_of_source(const Grid& grid, const Configuration& cfg,
                                  const Grid::MbbInfo& mbb, int source) {
  GridComponent c;
  c.agentIn.assign(grid.inst.n(), false);
  c.goodIn.assign(grid.inst.m(), false);
  std::vector<int> stack{source};
  c.agentIn[source] = true;
  while (!stack.empty()) {
    int a = stack.back();
    stack.pop_back();
    for (int j : mbb.goods[a]) {
      c.goodIn[j] = true;
      int h = cfg.allocation.owner(j);
      if (!c.agentIn[h]) {
        c.agentIn[h] = true;
        stack.push_back(h);
      }
    }
  }
  return c;
}

std::int64_t step_budget(const Instance& inst, const EpsilonScheme& scheme) {
  const std::int64_t n = inst.n();
  const std::int64_t m = inst.m();
  return 10 * n * n * n * m * (n * (m + scheme.maxExponent) + n + 1);
}

Configuration advance(const Instance& inst, const EpsilonScheme& scheme,
                      const Configuration& start, WalkStats* stats) {
  Grid grid(inst, scheme);
  Configuration cfg = start;
  std::vector<Rational> spend = grid.spendings(cfg);
  const Rational startMin = *std::min_element(spend.begin(), spend.end());
  const std::int64_t budget = step_budget(inst, scheme);
  std::int64_t steps = 0;

  // Agents whose components dead-end with zero spending and no positively
  // valued good outside (possible only when some values are zero) are frozen
  // so the walk can keep serving the remaining spenders; see the stall
  // handling below. Any transfer thaws everyone.
  std::vector<bool> frozen(inst.n(), false);

  while (true) {
    if (++steps > budget)
      throw StepBudgetExceeded("neighbor map exceeded its step budget");
    spend = grid.spendings(cfg);
    if (grid.eps_pef1(cfg, spend)) return cfg;
    if (*std::min_element(spend.begin(), spend.end()) > startMin) return cfg;

    Grid::MbbInfo mbb = grid.mbb(cfg.exponents);
    int source = lex_min_least_spender(spend, frozen);
    if (source == -1) {
      // Every agent sits in a stalled component. The allocation is returned
      // as a local optimum only if it is exactly EF1 on the original values.
      if (check_ef1(inst, cfg.allocation).holds) return cfg;
      throw StepBudgetExceeded("stalled without an EF1 allocation");
    }
    if (auto hit = find_violation(grid, cfg, mbb, source, spend)) {
      cfg.allocation.transfer(hit->good, hit->receiver);
      std::fill(frozen.begin(), frozen.end(), false);
      if (stats) ++stats->transfers;
      continue;
    }

    GridComponent comp = component_of_source(grid, cfg, mbb, source);

    // Stall: the source owns nothing (its spending can never rise) and no
    // component agent positively values a good outside the component (no
    // price rise ever creates an outgoing MBB edge). With positive values
    // this never happens; with zeros we accept the configuration when it is
    // already exactly EF1, otherwise freeze the component and move on.
    bool outsideValued = false;
    for (int h = 0; h < inst.n() && !outsideValued; ++h) {
      if (!comp.agentIn[h]) continue;
      for (int j = 0; j < inst.m(); ++j)
        if (!comp.goodIn[j] && grid.rounded.exponent[h][j]) {
          outsideValued = true;
          break;
        }
    }
    if (!outsideValued && spend[source] == 0) {
      if (check_ef1(inst, cfg.allocation).holds) return cfg;
      for (int h = 0; h < inst.n(); ++h)
        if (comp.agentIn[h]) frozen[h] = true;
      continue;
    }

    // Grid price rise on the least spender's component; events checked in
    // the order (b) eps-pEF1, (c) least spender leaves, (a) new MBB edge.
    const Rational riseStartMin = spend[source];
    while (true) {
      if (++steps > budget)
        throw StepBudgetExceeded("neighbor map exceeded its step budget");
      for (int j = 0; j < inst.m(); ++j) {
        if (!comp.goodIn[j]) continue;
        if (++cfg.exponents[j] > scheme.maxExponent)
          throw StepBudgetExceeded("price exponent bound exceeded");
      }
      if (stats) ++stats->priceRises;
      spend = grid.spendings(cfg);
      if (grid.eps_pef1(cfg, spend)) return cfg;                         // (b)
      if (*std::min_element(spend.begin(), spend.end()) > startMin) return cfg;
      int activeLs = lex_min_least_spender(spend, frozen);
      if (!comp.agentIn[activeLs]) break;                                // (c)
      if (spend[activeLs] > riseStartMin) break;                         // (c)
      Grid::MbbInfo risen = grid.mbb(cfg.exponents);
      bool newEdge = false;
      for (int h = 0; h < inst.n() && !newEdge; ++h) {
        if (!comp.agentIn[h]) continue;
        for (int j : risen.goods[h])
          if (!comp.goodIn[j]) {
            newEdge = true;
            break;
          }
      }
      if (newEdge) break;                                                // (a)
    }
  }
}

}  // namespace

bool is_valid_configuration(const Instance& inst, const EpsilonScheme& scheme,
                            const Configuration& config) {
  if (config.allocation.agents() != inst.n() ||
      config.allocation.goods() != inst.m() ||
      static_cast<int>(config.exponents.size()) != inst.m())
    return false;
  for (std::int64_t q : config.exponents)
    if (q < 0 || q > scheme.maxExponent) return false;
  Grid grid(inst, scheme);
  Grid::MbbInfo mbb = grid.mbb(config.exponents);
  for (int j = 0; j < inst.m(); ++j) {
    int owner = config.allocation.owner(j);
    if (!grid.rounded.exponent[owner][j]) return false;
    if (*grid.rounded.exponent[owner][j] - config.exponents[j] != mbb.maxExp[owner])
      return false;
  }
  return true;
}

Configuration initial_configuration(const Instance& inst, const EpsilonScheme& scheme) {
  RoundedValues rounded = round_valuations(inst, scheme);
  std::vector<int> owner(inst.m(), -1);
  std::vector<std::int64_t> q(inst.m(), 0);
  for (int j = 0; j < inst.m(); ++j) {
    for (int i = 0; i < inst.n(); ++i) {
      if (!rounded.exponent[i][j]) continue;
      if (owner[j] == -1 || *rounded.exponent[i][j] > *rounded.exponent[owner[j]][j])
        owner[j] = i;
    }
    q[j] = *rounded.exponent[owner[j]][j];
  }
  return Configuration{Allocation(inst.n(), owner), std::move(q)};
}

LexCost config_cost(const Instance& inst, const EpsilonScheme& scheme,
                    const Configuration& config) {
  if (!is_valid_configuration(inst, scheme, config)) return LexCost::bottom();
  Grid grid(inst, scheme);
  std::vector<Rational> spend = grid.spendings(config);
  LexCost cost;
  cost.delta = grid.eps_pef1(config, spend) ? 1 : 0;
  cost.minSpending = *std::min_element(spend.begin(), spend.end());
  return cost;
}

Configuration neighbor_D(const Instance& inst, const EpsilonScheme& scheme,
                         const Configuration& config) {
  if (!is_valid_configuration(inst, scheme, config))
    return initial_configuration(inst, scheme);
  return advance(inst, scheme, config, nullptr);
}

LocalSearchResult local_search(const Instance& inst, const EpsilonScheme& scheme) {
  Configuration cfg = initial_configuration(inst, scheme);
  WalkStats stats;
  Grid grid(inst, scheme);
  const std::int64_t budget = step_budget(inst, scheme);
  while (true) {
    std::vector<Rational> spend = grid.spendings(cfg);
    if (grid.eps_pef1(cfg, spend)) return LocalSearchResult{cfg, stats};
    Configuration next = advance(inst, scheme, cfg, &stats);
    // A stalled-but-EF1 configuration comes back unchanged: a local optimum
    // that is not eps-pEF1 (possible only with zero values).
    if (next.exponents == cfg.exponents && next.allocation == cfg.allocation)
      return LocalSearchResult{cfg, stats};
    cfg = std::move(next);
    if (++stats.steps > budget)
      throw StepBudgetExceeded("local search exceeded its walk budget");
  }
}

}  // namespace fairdiv
