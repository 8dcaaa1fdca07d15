#include <atomic>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "fairdiv/io.hpp"
#include "fairdiv/oracles.hpp"
#include "fairdiv/pls.hpp"
#include "fairdiv/solver.hpp"
#include "fairdiv/structured.hpp"

namespace {

using namespace fairdiv;

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitRefuted = 3;
constexpr int kExitBudget = 4;

void emit_error(const std::string& kind, const std::string& message) {
  nlohmann::ordered_json err;
  err["error"]["kind"] = kind;
  err["error"]["message"] = message;
  std::cerr << err.dump(2) << "\n";
}

std::string read_input(const std::string& path) {
  if (path.empty() || path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open input file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << text;
}

Rational coarse_epsilon(const Instance& inst) {
  // Smallest 1/2^k with 2^k >= 4 m vmax; keeps (1+eps)-powers desk-sized
  // while fixpoints remain EF1 on the original integer values.
  const std::int64_t target = 4 * inst.m() * inst.vmax();
  Integer denom = 1;
  while (denom < target) denom *= 2;
  return Rational(Integer(1), denom);
}

std::vector<std::vector<int>> bundles_of(const Allocation& alloc) {
  std::vector<std::vector<int>> bundles(alloc.agents());
  for (int i = 0; i < alloc.agents(); ++i) bundles[i] = alloc.bundle(i);
  return bundles;
}

Allocation allocation_from_bundles(int n, int m,
                                   const std::vector<std::vector<int>>& bundles) {
  if (static_cast<int>(bundles.size()) != n)
    throw ParseError("result bundle count disagrees with the instance");
  std::vector<int> owner(m, -1);
  for (int i = 0; i < n; ++i) {
    for (int g : bundles[i]) {
      if (g < 0 || g >= m || owner[g] != -1)
        throw ParseError("bundles must partition the goods");
      owner[g] = i;
    }
  }
  for (int g = 0; g < m; ++g)
    if (owner[g] == -1) throw ParseError("bundles must partition the goods");
  return Allocation(n, owner);
}

void add_check(std::vector<CheckEntry>& checks, std::string name,
               std::string oracle, bool holds) {
  checks.push_back(CheckEntry{std::move(name), std::move(oracle), holds,
                              std::nullopt});
}

// Cheap checks always; LP / brute force only within caps (or when forced).
std::vector<CheckEntry> run_checks(const Instance& inst, const Allocation& alloc,
                                   const MarketOutcome* outcome,
                                   const std::string& fairness, bool full) {
  std::vector<CheckEntry> checks;
  if (fairness == "eq1")
    add_check(checks, "eq1", "check_eq1", check_eq1(inst, alloc).holds);
  else
    add_check(checks, "ef1", "check_ef1", check_ef1(inst, alloc).holds);
  if (outcome) {
    add_check(checks, "on-mbb", "is_on_mbb", is_on_mbb(inst, *outcome));
    if (fairness != "eq1")
      add_check(checks, "pef1", "check_pef1", check_pef1(*outcome).holds);
    add_check(checks, "fpo-certificate", "is_on_mbb+check_pef1",
              is_on_mbb(inst, *outcome) &&
                  (fairness == "eq1" ? check_eq1(inst, alloc).holds
                                     : check_pef1(*outcome).holds));
  }
  if (full) {
    if (inst.n() * inst.m() <= lp_cap())
      add_check(checks, "fpo-lp", "check_fpo_lp", check_fpo_lp(inst, alloc).holds);
    if (allocation_count(inst.n(), inst.m()) <= enumeration_cap())
      add_check(checks, "po-bruteforce", "check_po_bruteforce",
                check_po_bruteforce(inst, alloc).holds);
  }
  return checks;
}

struct SolveOutput {
  ResultFile result;
  bool refuted = false;
};

SolveOutput do_solve(const Instance& inst, const std::string& fairness,
                     const std::string& method, bool fullChecks) {
  const auto start = std::chrono::steady_clock::now();
  ResultFile result;
  std::optional<MarketOutcome> outcome;
  std::optional<Allocation> alloc;

  if (method == "market") {
    SolveResult sr = fairness == "eq1" ? solve_eq1_fpo(inst) : solve_ef1_fpo(inst);
    outcome = sr.outcome;
    alloc = sr.outcome.allocation;
    result.stats.transfers = sr.trace.transfer_count();
    result.stats.priceRises = sr.trace.price_rise_count();
  } else if (method == "constant-n") {
    if (fairness == "eq1")
      throw InvalidParams("constant-n supports --fairness ef1 only");
    alloc = solve_constant_n_ef1_po(inst).allocation;
  } else if (method == "constant-nk") {
    if (fairness == "eq1")
      throw InvalidParams("constant-nk supports --fairness ef1 only");
    alloc = solve_constant_nk_mnw(inst).allocation;
  } else if (method == "pls") {
    if (fairness == "eq1") throw InvalidParams("pls supports --fairness ef1 only");
    EpsilonScheme scheme = EpsilonScheme::test_mode(inst, coarse_epsilon(inst));
    LocalSearchResult lr = local_search(inst, scheme);
    alloc = lr.fixpoint.allocation;
    result.stats.transfers = lr.stats.transfers;
    result.stats.priceRises = lr.stats.priceRises;
  } else {
    throw InvalidParams("unknown method: " + method);
  }

  result.bundles = bundles_of(*alloc);
  if (outcome) {
    std::vector<Rational> prices(inst.m());
    for (int j = 0; j < inst.m(); ++j) prices[j] = outcome->prices(j);
    result.prices = std::move(prices);
  }
  result.checks =
      run_checks(inst, *alloc, outcome ? &*outcome : nullptr, fairness, fullChecks);
  result.stats.wallMs =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                start)
          .count();
  SolveOutput out{std::move(result), false};
  for (const CheckEntry& c : out.result.checks)
    if (!c.holds) out.refuted = true;
  return out;
}

int cmd_solve(const std::string& inPath, const std::string& outPath,
              const std::string& fairness, const std::string& method,
              const std::string& checkMode) {
  InstanceFile file = parse_instance_file(read_input(inPath));
  SolveOutput out = do_solve(file.instance, fairness, method, checkMode == "full");
  write_output(outPath, serialize_result_file(out.result));
  if (out.refuted) {
    emit_error("oracle-refuted", "a recorded check failed on the emitted result");
    return kExitRefuted;
  }
  return kExitOk;
}

int cmd_check(const std::string& instancePath, const std::string& resultPath,
              const std::string& outPath) {
  InstanceFile file = parse_instance_file(read_input(instancePath));
  ResultFile given = parse_result_file(read_input(resultPath));
  const Instance& inst = file.instance;
  Allocation alloc = allocation_from_bundles(inst.n(), inst.m(), given.bundles);

  ResultFile verdicts;
  verdicts.bundles = given.bundles;
  add_check(verdicts.checks, "ef1", "check_ef1", check_ef1(inst, alloc).holds);
  add_check(verdicts.checks, "eq1", "check_eq1", check_eq1(inst, alloc).holds);
  if (given.prices) {
    if (static_cast<int>(given.prices->size()) != inst.m())
      throw ParseError("price count disagrees with the instance");
    RationalVector p(inst.m());
    for (int j = 0; j < inst.m(); ++j) p(j) = (*given.prices)[j];
    MarketOutcome outcome(alloc, p);
    verdicts.prices = given.prices;
    add_check(verdicts.checks, "on-mbb", "is_on_mbb", is_on_mbb(inst, outcome));
    add_check(verdicts.checks, "pef1", "check_pef1", check_pef1(outcome).holds);
  }
  if (inst.n() * inst.m() <= lp_cap())
    add_check(verdicts.checks, "fpo-lp", "check_fpo_lp",
              check_fpo_lp(inst, alloc).holds);
  if (allocation_count(inst.n(), inst.m()) <= enumeration_cap())
    add_check(verdicts.checks, "po-bruteforce", "check_po_bruteforce",
              check_po_bruteforce(inst, alloc).holds);
  write_output(outPath, serialize_result_file(verdicts));
  return kExitOk;
}

int cmd_gen(const std::string& familyName, int n, int m, std::int64_t vmax,
            std::uint64_t seed, int k, const std::string& outPath) {
  std::optional<Family> family = family_from_string(familyName);
  if (!family) throw InvalidParams("unknown family: " + familyName);
  InstanceFile file{generate(*family, n, m, vmax, seed, k), std::nullopt,
                    familyName, seed};
  write_output(outPath, serialize_instance_file(file));
  return kExitOk;
}

int cmd_bench(int count, int n, int m, std::int64_t vmax, std::uint64_t seed,
              const std::string& dir, int workers) {
  const Family families[] = {Family::Random, Family::Binary, Family::Kary,
                             Family::Positive, Family::Identical};
  struct Row {
    std::string name;
    Family family;
    std::int64_t transfers = 0, priceRises = 0;
    int U = 0;
    bool allHold = true;
    double wallMs = 0;
  };
  std::vector<Row> rows(count);
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  const int threads = std::max(1, workers);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (int idx = next.fetch_add(1); idx < count; idx = next.fetch_add(1)) {
        Family family = families[idx % std::size(families)];
        Instance inst = generate(family, n, m, vmax, seed + idx);
        SolveOutput out = do_solve(inst, "ef1", "market", true);
        Row row;
        char name[64];
        std::snprintf(name, sizeof name, "bench-%04d-%s", idx,
                      family_to_string(family).c_str());
        row.name = name;
        row.family = family;
        row.transfers = out.result.stats.transfers;
        row.priceRises = out.result.stats.priceRises;
        row.U = achievable_utilities(inst).U;
        row.allHold = !out.refuted;
        row.wallMs = out.result.stats.wallMs;
        if (!dir.empty()) {
          write_output(dir + "/" + row.name + ".instance.json",
                       serialize_instance_file(
                           InstanceFile{inst, row.name,
                                        family_to_string(family), seed + idx}));
          write_output(dir + "/" + row.name + ".result.json",
                       serialize_result_file(out.result));
        }
        rows[idx] = std::move(row);
      }
    });
  }
  for (auto& th : pool) th.join();
  std::sort(rows.begin(), rows.end(),
            [](const Row& a, const Row& b) { return a.name < b.name; });

  nlohmann::ordered_json summary;
  summary["schemaVersion"] = kSchemaVersion;
  summary["params"] = {{"count", count}, {"n", n},       {"m", m},
                       {"vmax", vmax},   {"seed", seed}};
  nlohmann::ordered_json table = nlohmann::ordered_json::array();
  bool refutedAny = false;
  std::printf("%-24s %9s %10s %4s %6s %9s\n", "instance", "transfers",
              "priceRises", "U", "holds", "wallMs");
  for (const Row& r : rows) {
    std::printf("%-24s %9lld %10lld %4d %6s %9.2f\n", r.name.c_str(),
                static_cast<long long>(r.transfers),
                static_cast<long long>(r.priceRises), r.U,
                r.allHold ? "yes" : "NO", r.wallMs);
    refutedAny = refutedAny || !r.allHold;
    table.push_back({{"name", r.name},
                     {"family", family_to_string(r.family)},
                     {"transfers", r.transfers},
                     {"priceRises", r.priceRises},
                     {"U", r.U},
                     {"allChecksHold", r.allHold},
                     {"wallMs", r.wallMs}});
  }
  summary["rows"] = std::move(table);
  if (!dir.empty())
    write_output(dir + "/summary.json", summary.dump(2) + "\n");
  return refutedAny ? kExitRefuted : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fair division solvers with exact-rational certificates"};
  app.require_subcommand(1);

  std::string inPath = "-", outPath = "-", fairness = "ef1", method = "market";
  std::string checkMode = "auto";
  auto* solve = app.add_subcommand("solve", "solve an instance");
  solve->add_option("--in", inPath, "instance JSON (default stdin)");
  solve->add_option("--out", outPath, "result JSON (default stdout)");
  solve->add_option("--fairness", fairness, "ef1|eq1")
      ->check(CLI::IsMember({"ef1", "eq1"}));
  solve->add_option("--method", method, "market|constant-n|constant-nk|pls")
      ->check(CLI::IsMember({"market", "constant-n", "constant-nk", "pls"}));
  solve->add_option("--check", checkMode, "auto|full")
      ->check(CLI::IsMember({"auto", "full"}));

  std::string instancePath = "-", resultPath;
  auto* check = app.add_subcommand("check", "check an allocation against oracles");
  check->add_option("--instance", instancePath, "instance JSON")->required();
  check->add_option("--result", resultPath, "result JSON with bundles")->required();
  check->add_option("--out", outPath, "verdict JSON (default stdout)");

  std::string familyName = "random";
  int n = 3, m = 5, k = 2, count = 50, workers = 4;
  std::int64_t vmax = 10;
  std::uint64_t seed = 1;
  auto* gen = app.add_subcommand("gen", "generate an instance");
  gen->add_option("--family", familyName, "random|binary|kary|positive|identical");
  gen->add_option("--n", n, "agents");
  gen->add_option("--m", m, "goods");
  gen->add_option("--vmax", vmax, "max value");
  gen->add_option("--seed", seed, "RNG seed");
  gen->add_option("--k", k, "distinct values per row (kary)");
  gen->add_option("--out", outPath, "instance JSON (default stdout)");

  std::string benchDir;
  auto* bench = app.add_subcommand("bench", "sweep a generated corpus");
  bench->add_option("--count", count, "instances");
  bench->add_option("--n", n, "agents");
  bench->add_option("--m", m, "goods");
  bench->add_option("--vmax", vmax, "max value");
  bench->add_option("--seed", seed, "base RNG seed");
  bench->add_option("--dir", benchDir, "directory for per-instance files");
  bench->add_option("--workers", workers, "worker threads");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return cmd_solve(inPath, outPath, fairness, method, checkMode);
    if (check->parsed()) return cmd_check(instancePath, resultPath, outPath);
    if (gen->parsed()) return cmd_gen(familyName, n, m, vmax, seed, k, outPath);
    return cmd_bench(count, n, m, vmax, seed, benchDir, workers);
  } catch (const ParseError& e) {
    emit_error("parse", e.what());
    return kExitParse;
  } catch (const ValidationError& e) {
    emit_error("validation", e.what());
    return kExitParse;
  } catch (const InvalidParams& e) {
    emit_error("params", e.what());
    return kExitParse;
  } catch (const IterationBudgetExceeded& e) {
    emit_error("budget", e.what());
    return kExitBudget;
  } catch (const StepBudgetExceeded& e) {
    emit_error("budget", e.what());
    return kExitBudget;
  } catch (const CapExceeded& e) {
    emit_error("budget", e.what());
    return kExitBudget;
  } catch (const InstanceTooLarge& e) {
    emit_error("budget", e.what());
    return kExitBudget;
  } catch (const std::exception& e) {
    emit_error("internal", e.what());
    return 1;
  }
}
