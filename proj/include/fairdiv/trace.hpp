#pragma once

#include "fairdiv/rational.hpp"

#include <cstdint>
#include <vector>

namespace fairdiv {

// One solver event (a transfer or a price rise) with full before/after
// snapshots; the lemma-level trace assertions are evaluated over these.
struct TraceEvent {
  enum class Kind { Transfer, PriceRise };
  enum class Trigger { None, Gamma1, Gamma2 };

  Kind kind;
  int timestamp = 0;

  // Transfer
  int good = -1;
  int fromAgent = -1;
  int toAgent = -1;
  int pathLength = 0;  // number of goods along the alternating path

  // PriceRise
  std::vector<int> componentAgents;
  std::vector<int> componentGoods;
  Rational gamma1 = 0;
  bool gamma1Finite = false;
  Rational gamma2 = 0;
  bool gamma2Finite = false;
  Rational beta = 0;
  Trigger trigger = Trigger::None;

  // Snapshots (pre- and post-event)
  std::vector<Rational> spendingBefore, spendingAfter;
  std::vector<std::int64_t> utilityBefore, utilityAfter;
  std::vector<int> sourcesBefore;  // least spenders (EF1) / least-utility (EQ1)
};

struct TraceLog {
  std::vector<TraceEvent> events;

  int transfer_count() const {
    int c = 0;
    for (const auto& e : events)
      if (e.kind == TraceEvent::Kind::Transfer) ++c;
    return c;
  }
  int price_rise_count() const {
    return static_cast<int>(events.size()) - transfer_count();
  }
};

}  // namespace fairdiv
