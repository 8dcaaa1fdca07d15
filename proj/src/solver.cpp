#include "fairdiv/solver.hpp"

#include "fairdiv/oracles.hpp"

#include <algorithm>
#include <limits>

namespace fairdiv {

MarketOutcome initial_outcome(const Instance& inst) {
  std::vector<int> owner(inst.m(), 0);
  RationalVector prices(inst.m());
  for (int j = 0; j < inst.m(); ++j) {
    int best = 0;
    for (int i = 1; i < inst.n(); ++i)
      if (inst.value(i, j) > inst.value(best, j)) best = i;
    owner[j] = best;
    prices(j) = Rational(inst.value(best, j));
  }
  return MarketOutcome(Allocation(inst.n(), owner), std::move(prices));
}

std::vector<int> least_spenders(const MarketOutcome& outcome) {
  std::vector<Rational> spend = spending_vector(outcome);
  Rational least = spend[0];
  for (const Rational& s : spend) least = std::min(least, s);
  std::vector<int> argmin;
  for (int i = 0; i < static_cast<int>(spend.size()); ++i)
    if (spend[i] == least) argmin.push_back(i);
  return argmin;
}

std::vector<int> least_utility_agents(const Instance& inst, const Allocation& alloc) {
  std::vector<std::int64_t> u = utility_vector(inst, alloc);
  std::int64_t least = *std::min_element(u.begin(), u.end());
  std::vector<int> argmin;
  for (int i = 0; i < inst.n(); ++i)
    if (u[i] == least) argmin.push_back(i);
  return argmin;
}

Component component_of(const MarketOutcome& outcome, const MBBGraph& graph,
                       const std::vector<int>& sources) {
  const int n = static_cast<int>(graph.alpha.size());
  const int m = static_cast<int>(graph.ownerOf.size());
  Component c;
  c.levels.assign(n, n);
  std::vector<bool> goodIn(m, false);
  std::vector<int> frontier;
  for (int s : sources) {
    c.levels[s] = 0;
    frontier.push_back(s);
  }
  std::sort(frontier.begin(), frontier.end());
  int level = 0;
  while (!frontier.empty()) {
    std::vector<int> next;
    for (int a : frontier) {
      for (int j : graph.mbbEdges[a]) {
        goodIn[j] = true;
        int h = graph.ownerOf[j];
        if (c.levels[h] == n) {
          c.levels[h] = level + 1;
          next.push_back(h);
        }
      }
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    frontier = std::move(next);
    ++level;
  }
  for (int a = 0; a < n; ++a)
    if (c.levels[a] < n) c.agents.push_back(a);
  for (int j = 0; j < m; ++j)
    if (goodIn[j]) c.goods.push_back(j);
  return c;
}

namespace {

struct Candidate {
  int fromAgent;
  int good;
  int owner;
};

struct SourceBfs {
  std::vector<int> level;      // -1 unvisited
  std::vector<int> prevAgent;  // discovery parents
  std::vector<int> viaGood;
  std::vector<std::vector<Candidate>> candidatesPerLayer;  // index = layer of owner
};

SourceBfs bfs_special_paths(const MBBGraph& graph, int source) {
  const int n = static_cast<int>(graph.alpha.size());
  SourceBfs bfs;
  bfs.level.assign(n, -1);
  bfs.prevAgent.assign(n, -1);
  bfs.viaGood.assign(n, -1);
  bfs.level[source] = 0;
  bfs.candidatesPerLayer.push_back({});  // layer 0: no candidates
  std::vector<int> frontier{source};
  int layer = 0;
  while (!frontier.empty()) {
    std::vector<int> next;
    std::vector<Candidate> cands;
    for (int a : frontier) {
      for (int j : graph.mbbEdges[a]) {
        int h = graph.ownerOf[j];
        if (bfs.level[h] == -1) {
          bfs.level[h] = layer + 1;
          bfs.prevAgent[h] = a;
          bfs.viaGood[h] = j;
          next.push_back(h);
          cands.push_back({a, j, h});
        } else if (bfs.level[h] == layer + 1) {
          // a second alternating path to h, with a different transfer good
          cands.push_back({a, j, h});
        }
      }
    }
    std::sort(next.begin(), next.end());
    bfs.candidatesPerLayer.push_back(std::move(cands));
    frontier = std::move(next);
    ++layer;
  }
  return bfs;
}

ViolatingPath reconstruct(const SourceBfs& bfs, const Candidate& cand) {
  std::vector<int> agents{cand.owner};
  std::vector<int> goods{cand.good};
  int a = cand.fromAgent;
  agents.push_back(a);
  while (bfs.prevAgent[a] != -1) {
    goods.push_back(bfs.viaGood[a]);
    a = bfs.prevAgent[a];
    agents.push_back(a);
  }
  std::reverse(agents.begin(), agents.end());
  std::reverse(goods.begin(), goods.end());
  return ViolatingPath{std::move(agents), std::move(goods)};
}

}  // namespace

namespace {

std::optional<ViolatingPath> find_violating_path_from(const Instance& inst,
                                                      const MarketOutcome& outcome,
                                                      const MBBGraph& graph,
                                                      PathMode mode,
                                                      const std::vector<int>& sources) {
  std::vector<Rational> spend = spending_vector(outcome);
  std::vector<std::int64_t> util = utility_vector(inst, outcome.allocation);

  std::vector<SourceBfs> perSource;
  perSource.reserve(sources.size());
  for (int s : sources) perSource.push_back(bfs_special_paths(graph, s));

  // All sources share the same spending (EF1 mode) or utility (EQ1 mode).
  const Rational minSpend = spend[sources.front()];
  const std::int64_t minUtil = util[sources.front()];

  for (int layer = 1; layer <= inst.n(); ++layer) {
    for (std::size_t s = 0; s < sources.size(); ++s) {
      const SourceBfs& bfs = perSource[s];
      if (layer >= static_cast<int>(bfs.candidatesPerLayer.size())) continue;
      for (const Candidate& cand : bfs.candidatesPerLayer[layer]) {
        bool violated;
        if (mode == PathMode::SpendingEF1) {
          violated = spend[cand.owner] - outcome.prices(cand.good) > minSpend;
        } else {
          violated = util[cand.owner] - inst.value(cand.owner, cand.good) > minUtil;
        }
        if (violated) return reconstruct(bfs, cand);
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<ViolatingPath> find_violating_path(const Instance& inst,
                                                 const MarketOutcome& outcome,
                                                 const MBBGraph& graph,
                                                 PathMode mode) {
  std::vector<int> sources = (mode == PathMode::SpendingEF1)
                                 ? least_spenders(outcome)
                                 : least_utility_agents(inst, outcome.allocation);
  return find_violating_path_from(inst, outcome, graph, mode, sources);
}

MarketOutcome apply_transfer(const MarketOutcome& outcome, const ViolatingPath& path) {
  MarketOutcome next = outcome;
  next.allocation.transfer(path.transfer_good(), path.receiver());
  return next;
}

PriceRiseFactors price_rise_factors(const Instance& inst, const MarketOutcome& outcome,
                                    const Component& component, RiseMode mode) {
  const int n = inst.n();
  const int m = inst.m();
  std::vector<bool> agentIn(n, false), goodIn(m, false);
  for (int a : component.agents) agentIn[a] = true;
  for (int j : component.goods) goodIn[j] = true;

  MBBGraph graph = build_mbb_graph(inst, outcome);

  PriceRiseFactors f;
  for (int h : component.agents) {
    for (int j = 0; j < m; ++j) {
      if (goodIn[j] || inst.value(h, j) <= 0) continue;
      Rational candidate = graph.alpha[h] * outcome.prices(j) / Rational(inst.value(h, j));
      if (!f.gamma1 || candidate < *f.gamma1) f.gamma1 = candidate;
    }
  }
  if (mode == RiseMode::WithGamma2) {
    std::vector<Rational> spend = spending_vector(outcome);
    // L = the component's sources (level 0). Their spending is 0 exactly when
    // they own nothing; raising prices can never equalize anyone to 0, so
    // gamma2 is infinite then. Candidates <= 1 (agents already at or below the
    // source spending) can never be reached by raising prices either.
    Rational minSpend = -1;
    for (int a : component.agents)
      if (component.levels[a] == 0) minSpend = spend[a];
    if (minSpend > 0) {
      for (int h = 0; h < n; ++h) {
        if (agentIn[h]) continue;
        Rational candidate = spend[h] / minSpend;
        if (candidate <= 1) continue;
        if (!f.gamma2 || candidate < *f.gamma2) f.gamma2 = candidate;
      }
    }
  }
  if (!f.gamma1 && !f.gamma2)
    throw NoFiniteFactor("price rise with no finite factor");
  if (f.gamma1 && f.gamma2)
    f.beta = std::min(*f.gamma1, *f.gamma2);
  else
    f.beta = f.gamma1 ? *f.gamma1 : *f.gamma2;
  if (f.beta <= 1) throw NoFiniteFactor("price-rise factor not above 1");
  return f;
}

MarketOutcome apply_price_rise(const MarketOutcome& outcome, const Component& component,
                               const Rational& beta) {
  MarketOutcome next = outcome;
  for (int j : component.goods) next.prices(j) *= beta;
  return next;
}

namespace {

std::int64_t event_budget(const Instance& inst) {
  // 10 * n^3 m * (n U + n) with the coarse bound U <= m v_max + 1.
  const std::int64_t n = inst.n();
  const std::int64_t m = inst.m();
  const std::int64_t ubound = m * inst.vmax() + 1;
  return 10 * n * n * n * m * (n * ubound + n);
}

SolveResult run_market_solver(const Instance& inst, PathMode mode) {
  MarketOutcome outcome = initial_outcome(inst);
  TraceLog trace;
  const std::int64_t budget = event_budget(inst);

  auto snapshot_sources = [&](const MarketOutcome& o) {
    return (mode == PathMode::SpendingEF1)
               ? least_spenders(o)
               : least_utility_agents(inst, o.allocation);
  };

  // A least spender owning nothing whose component values no outside good has
  // infinite rise factors: the component can neither grow nor rebalance and
  // gets frozen. Work then continues from the least spenders among the
  // remaining agents; any transfer invalidates the frozen certificates.
  // (Only possible with zero values, and only in EF1 mode.)
  std::vector<bool> frozen(inst.n(), false);
  std::int64_t stalls = 0;

  while (true) {
    if (static_cast<std::int64_t>(trace.events.size()) + stalls > budget)
      throw IterationBudgetExceeded("market solver exceeded its event budget");

    MBBGraph graph = build_mbb_graph(inst, outcome);
    TraceEvent event;
    event.timestamp = static_cast<int>(trace.events.size());
    event.spendingBefore = spending_vector(outcome);
    event.utilityBefore = utility_vector(inst, outcome.allocation);
    event.sourcesBefore = snapshot_sources(outcome);

    std::vector<int> activeSources;
    if (mode == PathMode::SpendingEF1) {
      Rational best = -1;
      for (int a = 0; a < inst.n(); ++a) {
        if (frozen[a]) continue;
        if (best == -1 || event.spendingBefore[a] < best)
          best = event.spendingBefore[a];
      }
      for (int a = 0; a < inst.n(); ++a)
        if (!frozen[a] && event.spendingBefore[a] == best)
          activeSources.push_back(a);
      if (activeSources.empty()) {
        // every agent sits in a stalled component
        if (check_ef1(inst, outcome.allocation).holds) break;
        throw IterationBudgetExceeded("stalled without an EF1 allocation");
      }
    } else {
      activeSources = event.sourcesBefore;
    }

    if (auto path =
            find_violating_path_from(inst, outcome, graph, mode, activeSources)) {
      std::fill(frozen.begin(), frozen.end(), false);
      event.kind = TraceEvent::Kind::Transfer;
      event.good = path->transfer_good();
      event.fromAgent = path->sender();
      event.toAgent = path->receiver();
      event.pathLength = static_cast<int>(path->goods.size());
      outcome = apply_transfer(outcome, *path);
    } else {
      bool done = (mode == PathMode::SpendingEF1)
                      ? check_pef1(outcome).holds
                      : check_eq1(inst, outcome.allocation).holds;
      if (done) break;
      Component comp = component_of(outcome, graph, activeSources);
      RiseMode rise = (mode == PathMode::SpendingEF1) ? RiseMode::WithGamma2
                                                      : RiseMode::Gamma1Only;
      PriceRiseFactors f;
      try {
        f = price_rise_factors(inst, outcome, comp, rise);
      } catch (const NoFiniteFactor&) {
        // Stalled component. pEF1 is unattainable, but EF1 may already hold
        // (the component's agents value nothing outside it); otherwise freeze
        // it and keep working on the rest of the market.
        if (mode != PathMode::SpendingEF1) throw;
        if (check_ef1(inst, outcome.allocation).holds) break;
        bool grew = false;
        for (int a : comp.agents)
          if (!frozen[a]) frozen[a] = grew = true;
        if (!grew)
          throw IterationBudgetExceeded("stalled without an EF1 allocation");
        ++stalls;
        continue;
      }
      event.kind = TraceEvent::Kind::PriceRise;
      event.componentAgents = comp.agents;
      event.componentGoods = comp.goods;
      event.gamma1Finite = f.gamma1.has_value();
      if (f.gamma1) event.gamma1 = *f.gamma1;
      event.gamma2Finite = f.gamma2.has_value();
      if (f.gamma2) event.gamma2 = *f.gamma2;
      event.beta = f.beta;
      event.trigger = (f.gamma1 && f.beta == *f.gamma1) ? TraceEvent::Trigger::Gamma1
                                                        : TraceEvent::Trigger::Gamma2;
      outcome = apply_price_rise(outcome, comp, f.beta);
    }

    event.spendingAfter = spending_vector(outcome);
    event.utilityAfter = utility_vector(inst, outcome.allocation);
    trace.events.push_back(std::move(event));
  }
  return SolveResult{std::move(outcome), std::move(trace)};
}

}  // namespace

SolveResult solve_ef1_fpo(const Instance& inst) {
  return run_market_solver(inst, PathMode::SpendingEF1);
}

SolveResult solve_eq1_fpo(const Instance& inst) {
  if (!inst.positive())
    throw NotPositiveInstance("EQ1 solver requires strictly positive values");
  return run_market_solver(inst, PathMode::UtilityEQ1);
}

}  // namespace fairdiv
