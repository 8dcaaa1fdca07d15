#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fairdiv/instance.hpp"
#include "fairdiv/trace.hpp"

namespace fairdiv {

inline constexpr int kSchemaVersion = 1;

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidParams : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InstanceFile {
  Instance instance;
  std::optional<std::string> name;
  std::optional<std::string> family;
  std::optional<std::uint64_t> seed;
};

// Strict parse: rejects unknown schema versions, non-integer values, ragged
// rows, and dimension mismatches. serialize emits the canonical key order,
// so serialize(parse(d)) is the canonical form of d.
InstanceFile parse_instance_file(const std::string& text);
std::string serialize_instance_file(const InstanceFile& file);

struct CheckEntry {
  std::string name;    // e.g. "ef1", "fpo-lp"
  std::string oracle;  // implementation that produced the verdict
  bool holds = false;
  std::optional<std::string> detail;
};

struct ResultStats {
  std::int64_t transfers = 0;
  std::int64_t priceRises = 0;
  double wallMs = 0;  // reporting only, never feeds a decision
};

struct ResultFile {
  std::vector<std::vector<int>> bundles;
  std::optional<std::vector<Rational>> prices;  // present iff a certificate was emitted
  std::vector<CheckEntry> checks;
  ResultStats stats;
};

ResultFile parse_result_file(const std::string& text);
std::string serialize_result_file(const ResultFile& file);

std::string serialize_trace(const TraceLog& trace);

enum class Family { Random, Binary, Kary, Positive, Identical };

std::optional<Family> family_from_string(const std::string& s);
std::string family_to_string(Family f);

// Deterministic for a fixed (family, n, m, vmax, seed, k); output always
// passes validate_instance and the family predicate.
Instance generate(Family family, int n, int m, std::int64_t vmax,
                  std::uint64_t seed, int k = 2);

}  // namespace fairdiv
