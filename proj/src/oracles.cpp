#include "fairdiv/oracles.hpp"

#include <algorithm>

namespace fairdiv {

MnwResult bruteforce_mnw(const Instance& inst) {
  if (allocation_count(inst.n(), inst.m()) > enumeration_cap())
    throw InstanceTooLarge("MNW brute force: n^m over cap");
  std::optional<MnwResult> best;
  for_each_allocation(inst.n(), inst.m(), [&](const Allocation& alloc) {
    MnwScore score = MnwScore::of(utility_vector(inst, alloc));
    if (!best || score.better_than(best->score))
      best = MnwResult{alloc, std::move(score)};
  });
  return *best;
}

LeximinResult bruteforce_leximin(const Instance& inst) {
  if (allocation_count(inst.n(), inst.m()) > enumeration_cap())
    throw InstanceTooLarge("leximin brute force: n^m over cap");
  std::optional<LeximinResult> best;
  for_each_allocation(inst.n(), inst.m(), [&](const Allocation& alloc) {
    std::vector<std::int64_t> sorted = utility_vector(inst, alloc);
    std::sort(sorted.begin(), sorted.end());
    if (!best || std::lexicographical_compare(best->sortedUtilities.begin(),
                                              best->sortedUtilities.end(),
                                              sorted.begin(), sorted.end()))
      best = LeximinResult{alloc, std::move(sorted)};
  });
  return *best;
}

std::optional<Allocation> bruteforce_satisfying(
    const Instance& inst,
    const std::function<bool(const Allocation&)>& predicate) {
  if (allocation_count(inst.n(), inst.m()) > enumeration_cap())
    throw InstanceTooLarge("predicate brute force: n^m over cap");
  std::optional<Allocation> found;
  for_each_allocation(inst.n(), inst.m(), [&](const Allocation& alloc) {
    if (!found && predicate(alloc)) found = alloc;
  });
  return found;
}

}  // namespace fairdiv
