#pragma once

#include "fairdiv/rational.hpp"

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace fairdiv {

enum class ValidationFault {
  EmptyInstance,
  NegativeValue,
  UnvaluedGood,   // some column is all-zero
  UnvaluedAgent,  // some row is all-zero
};

struct ValidationError : std::runtime_error {
  ValidationError(ValidationFault f, const std::string& what)
      : std::runtime_error(what), fault(f) {}
  ValidationFault fault;
};

// n agents, m goods, nonnegative integer valuations. Every agent positively
// values some good and every good is positively valued by some agent;
// construct through validate_instance to get those invariants.
class Instance {
 public:
  int n() const { return static_cast<int>(values_.rows()); }
  int m() const { return static_cast<int>(values_.cols()); }
  std::int64_t value(int agent, int good) const { return values_(agent, good); }
  const ValueMatrix& values() const { return values_; }

  std::int64_t vmax() const { return values_.maxCoeff(); }

  // max per-row distinct-value count (the "k" of a k-ary instance)
  int arity() const {
    int k = 0;
    for (int i = 0; i < n(); ++i) {
      std::set<std::int64_t> distinct;
      for (int j = 0; j < m(); ++j) distinct.insert(values_(i, j));
      k = std::max(k, static_cast<int>(distinct.size()));
    }
    return k;
  }

  bool positive() const { return values_.minCoeff() > 0; }

  friend Instance validate_instance(const ValueMatrix& raw);

 private:
  explicit Instance(ValueMatrix v) : values_(std::move(v)) {}
  ValueMatrix values_;
};

inline Instance validate_instance(const ValueMatrix& raw) {
  if (raw.rows() == 0 || raw.cols() == 0)
    throw ValidationError(ValidationFault::EmptyInstance, "empty instance");
  if (raw.minCoeff() < 0)
    throw ValidationError(ValidationFault::NegativeValue, "negative valuation");
  for (int j = 0; j < raw.cols(); ++j)
    if (raw.col(j).maxCoeff() == 0)
      throw ValidationError(ValidationFault::UnvaluedGood,
                            "good " + std::to_string(j) + " valued by no agent");
  for (int i = 0; i < raw.rows(); ++i)
    if (raw.row(i).maxCoeff() == 0)
      throw ValidationError(ValidationFault::UnvaluedAgent,
                            "agent " + std::to_string(i) + " values no good");
  return Instance(raw);
}

inline Instance instance_from_rows(
    const std::vector<std::vector<std::int64_t>>& rows) {
  if (rows.empty() || rows.front().empty())
    throw ValidationError(ValidationFault::EmptyInstance, "empty instance");
  ValueMatrix v(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.front().size())
      throw ValidationError(ValidationFault::EmptyInstance, "ragged rows");
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      v(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
  }
  return validate_instance(v);
}

// Partition of the goods into n bundles, stored as an owner index per good.
class Allocation {
 public:
  Allocation(int agents, std::vector<int> ownerOf)
      : agents_(agents), owner_(std::move(ownerOf)) {
    for (int o : owner_)
      if (o < 0 || o >= agents_)
        throw std::invalid_argument("good owner out of range");
  }

  static Allocation everything_to(int agents, int agent, int goods) {
    return Allocation(agents, std::vector<int>(goods, agent));
  }

  int agents() const { return agents_; }
  int goods() const { return static_cast<int>(owner_.size()); }
  int owner(int good) const { return owner_[good]; }

  std::vector<int> bundle(int agent) const {
    std::vector<int> b;
    for (int j = 0; j < goods(); ++j)
      if (owner_[j] == agent) b.push_back(j);
    return b;
  }

  int bundle_size(int agent) const {
    int c = 0;
    for (int o : owner_)
      if (o == agent) ++c;
    return c;
  }

  void transfer(int good, int toAgent) { owner_[good] = toAgent; }

  bool operator==(const Allocation& other) const = default;

 private:
  int agents_;
  std::vector<int> owner_;
};

inline std::int64_t utility(const Instance& inst, const Allocation& alloc,
                            int agent) {
  std::int64_t u = 0;
  for (int j = 0; j < inst.m(); ++j)
    if (alloc.owner(j) == agent) u += inst.value(agent, j);
  return u;
}

inline std::vector<std::int64_t> utility_vector(const Instance& inst,
                                                const Allocation& alloc) {
  std::vector<std::int64_t> u(inst.n(), 0);
  for (int j = 0; j < inst.m(); ++j)
    u[alloc.owner(j)] += inst.value(alloc.owner(j), j);
  return u;
}

}  // namespace fairdiv
