#include "fairdiv/io.hpp"

#include <algorithm>
#include <random>

#include "json.hpp"

namespace fairdiv {

using json = nlohmann::ordered_json;

namespace {

json parse_document(const std::string& text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw ParseError("malformed JSON document");
  if (!doc.is_object()) throw ParseError("top-level value must be an object");
  return doc;
}

void require_schema(const json& doc) {
  if (!doc.contains("schemaVersion") || !doc["schemaVersion"].is_number_integer())
    throw ParseError("missing integer field 'schemaVersion'");
  if (doc["schemaVersion"].get<int>() != kSchemaVersion)
    throw ParseError("unsupported schemaVersion");
}

std::int64_t int_field(const json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_number_integer())
    throw ParseError(std::string("missing integer field '") + key + "'");
  return doc[key].get<std::int64_t>();
}

}  // namespace

InstanceFile parse_instance_file(const std::string& text) {
  json doc = parse_document(text);
  require_schema(doc);
  const std::int64_t n = int_field(doc, "agents");
  const std::int64_t m = int_field(doc, "goods");
  if (!doc.contains("valuations") || !doc["valuations"].is_array())
    throw ParseError("missing array field 'valuations'");
  const json& rows = doc["valuations"];
  if (static_cast<std::int64_t>(rows.size()) != n)
    throw ParseError("valuations row count disagrees with 'agents'");
  std::vector<std::vector<std::int64_t>> values;
  values.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const json& row = rows[i];
    if (!row.is_array() || static_cast<std::int64_t>(row.size()) != m)
      throw ParseError("valuations row " + std::to_string(i) + " is ragged");
    std::vector<std::int64_t> out;
    out.reserve(row.size());
    for (const json& cell : row) {
      if (!cell.is_number_integer())
        throw ParseError("valuations row " + std::to_string(i) +
                         " holds a non-integer value");
      out.push_back(cell.get<std::int64_t>());
    }
    values.push_back(std::move(out));
  }
  InstanceFile file{instance_from_rows(values), std::nullopt, std::nullopt,
                    std::nullopt};
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) throw ParseError("'name' must be a string");
    file.name = doc["name"].get<std::string>();
  }
  if (doc.contains("family")) {
    if (!doc["family"].is_string()) throw ParseError("'family' must be a string");
    file.family = doc["family"].get<std::string>();
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned() && !doc["seed"].is_number_integer())
      throw ParseError("'seed' must be an integer");
    file.seed = doc["seed"].get<std::uint64_t>();
  }
  return file;
}

std::string serialize_instance_file(const InstanceFile& file) {
  json doc;
  doc["schemaVersion"] = kSchemaVersion;
  doc["agents"] = file.instance.n();
  doc["goods"] = file.instance.m();
  json rows = json::array();
  for (int i = 0; i < file.instance.n(); ++i) {
    json row = json::array();
    for (int j = 0; j < file.instance.m(); ++j) row.push_back(file.instance.value(i, j));
    rows.push_back(std::move(row));
  }
  doc["valuations"] = std::move(rows);
  if (file.name) doc["name"] = *file.name;
  if (file.family) doc["family"] = *file.family;
  if (file.seed) doc["seed"] = *file.seed;
  return doc.dump(2) + "\n";
}

ResultFile parse_result_file(const std::string& text) {
  json doc = parse_document(text);
  require_schema(doc);
  ResultFile file;
  if (!doc.contains("bundles") || !doc["bundles"].is_array())
    throw ParseError("missing array field 'bundles'");
  for (const json& bundle : doc["bundles"]) {
    if (!bundle.is_array()) throw ParseError("'bundles' entries must be arrays");
    std::vector<int> goods;
    for (const json& g : bundle) {
      if (!g.is_number_integer()) throw ParseError("bundle entries must be integers");
      goods.push_back(g.get<int>());
    }
    file.bundles.push_back(std::move(goods));
  }
  if (doc.contains("prices")) {
    if (!doc["prices"].is_array()) throw ParseError("'prices' must be an array");
    std::vector<Rational> prices;
    for (const json& p : doc["prices"]) {
      if (!p.is_string()) throw ParseError("prices must be \"p/q\" strings");
      prices.push_back(rational_from_string(p.get<std::string>()));
    }
    file.prices = std::move(prices);
  }
  if (doc.contains("checks")) {
    if (!doc["checks"].is_array()) throw ParseError("'checks' must be an array");
    for (const json& c : doc["checks"]) {
      if (!c.is_object() || !c.contains("name") || !c.contains("oracle") ||
          !c.contains("holds"))
        throw ParseError("check entries need 'name', 'oracle', 'holds'");
      CheckEntry entry;
      entry.name = c["name"].get<std::string>();
      entry.oracle = c["oracle"].get<std::string>();
      entry.holds = c["holds"].get<bool>();
      if (c.contains("detail")) entry.detail = c["detail"].get<std::string>();
      file.checks.push_back(std::move(entry));
    }
  }
  if (doc.contains("stats")) {
    const json& s = doc["stats"];
    file.stats.transfers = s.value("transfers", std::int64_t{0});
    file.stats.priceRises = s.value("priceRises", std::int64_t{0});
    file.stats.wallMs = s.value("wallMs", 0.0);
  }
  return file;
}

std::string serialize_result_file(const ResultFile& file) {
  json doc;
  doc["schemaVersion"] = kSchemaVersion;
  json bundles = json::array();
  for (const auto& bundle : file.bundles) {
    json b = json::array();
    for (int g : bundle) b.push_back(g);
    bundles.push_back(std::move(b));
  }
  doc["bundles"] = std::move(bundles);
  if (file.prices) {
    json prices = json::array();
    for (const Rational& p : *file.prices) prices.push_back(rational_to_string(p));
    doc["prices"] = std::move(prices);
  }
  json checks = json::array();
  for (const CheckEntry& c : file.checks) {
    json e;
    e["name"] = c.name;
    e["oracle"] = c.oracle;
    e["holds"] = c.holds;
    if (c.detail) e["detail"] = *c.detail;
    checks.push_back(std::move(e));
  }
  doc["checks"] = std::move(checks);
  json stats;
  stats["transfers"] = file.stats.transfers;
  stats["priceRises"] = file.stats.priceRises;
  stats["wallMs"] = file.stats.wallMs;
  doc["stats"] = std::move(stats);
  return doc.dump(2) + "\n";
}

std::string serialize_trace(const TraceLog& trace) {
  json doc;
  doc["schemaVersion"] = kSchemaVersion;
  doc["transfers"] = trace.transfer_count();
  doc["priceRises"] = trace.price_rise_count();
  json events = json::array();
  for (const TraceEvent& ev : trace.events) {
    json e;
    e["t"] = ev.timestamp;
    e["kind"] = ev.kind == TraceEvent::Kind::Transfer ? "transfer" : "priceRise";
    if (ev.kind == TraceEvent::Kind::Transfer) {
      e["good"] = ev.good;
      e["from"] = ev.fromAgent;
      e["to"] = ev.toAgent;
      e["pathLength"] = ev.pathLength;
    } else {
      e["trigger"] = ev.trigger == TraceEvent::Trigger::Gamma1 ? "gamma1" : "gamma2";
      e["beta"] = rational_to_string(ev.beta);
      json agents = json::array();
      for (int a : ev.componentAgents) agents.push_back(a);
      e["componentAgents"] = std::move(agents);
      json goods = json::array();
      for (int g : ev.componentGoods) goods.push_back(g);
      e["componentGoods"] = std::move(goods);
    }
    events.push_back(std::move(e));
  }
  doc["events"] = std::move(events);
  return doc.dump(2) + "\n";
}

std::optional<Family> family_from_string(const std::string& s) {
  if (s == "random") return Family::Random;
  if (s == "binary") return Family::Binary;
  if (s == "kary") return Family::Kary;
  if (s == "positive") return Family::Positive;
  if (s == "identical") return Family::Identical;
  return std::nullopt;
}

std::string family_to_string(Family f) {
  switch (f) {
    case Family::Random: return "random";
    case Family::Binary: return "binary";
    case Family::Kary: return "kary";
    case Family::Positive: return "positive";
    case Family::Identical: return "identical";
  }
  return "random";
}

namespace {

// Give every all-zero row and column a positive entry drawn from `repair`,
// keeping the family predicate intact (callers pass family-safe values).
void repair_coverage(std::vector<std::vector<std::int64_t>>& values,
                     std::mt19937_64& rng,
                     const std::vector<std::int64_t>& repairPool) {
  const int n = static_cast<int>(values.size());
  const int m = static_cast<int>(values[0].size());
  std::uniform_int_distribution<std::size_t> pick(0, repairPool.size() - 1);
  for (int i = 0; i < n; ++i) {
    if (std::all_of(values[i].begin(), values[i].end(),
                    [](std::int64_t v) { return v == 0; })) {
      std::uniform_int_distribution<int> col(0, m - 1);
      values[i][col(rng)] = repairPool[pick(rng)];
    }
  }
  for (int j = 0; j < m; ++j) {
    bool covered = false;
    for (int i = 0; i < n; ++i) covered = covered || values[i][j] > 0;
    if (!covered) {
      std::uniform_int_distribution<int> row(0, n - 1);
      values[row(rng)][j] = repairPool[pick(rng)];
    }
  }
}

}  // namespace

Instance generate(Family family, int n, int m, std::int64_t vmax,
                  std::uint64_t seed, int k) {
  if (n <= 0 || m <= 0 || vmax <= 0) throw InvalidParams("n, m, vmax must be positive");
  if (family == Family::Kary && k <= 0) throw InvalidParams("k must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> full(0, vmax);
  std::uniform_int_distribution<std::int64_t> positive(1, vmax);
  std::vector<std::vector<std::int64_t>> values(n, std::vector<std::int64_t>(m, 0));

  switch (family) {
    case Family::Random:
      for (auto& row : values)
        for (auto& v : row) v = full(rng);
      repair_coverage(values, rng, {1});
      break;
    case Family::Binary:
      for (auto& row : values)
        for (auto& v : row) v = full(rng) > vmax / 2 ? 1 : 0;
      repair_coverage(values, rng, {1});
      break;
    case Family::Kary: {
      for (auto& row : values) {
        std::vector<std::int64_t> palette;
        palette.push_back(positive(rng));  // at least one positive value per row
        while (static_cast<int>(palette.size()) < k) palette.push_back(full(rng));
        std::uniform_int_distribution<std::size_t> pick(0, palette.size() - 1);
        for (auto& v : row) v = palette[pick(rng)];
        // Keep the row's palette available for coverage repair.
        bool hasPositive = std::any_of(row.begin(), row.end(),
                                       [](std::int64_t v) { return v > 0; });
        if (!hasPositive) row[0] = palette[0];
      }
      // Column repair must reuse a value already in the chosen row.
      for (int j = 0; j < m; ++j) {
        bool covered = false;
        for (int i = 0; i < n; ++i) covered = covered || values[i][j] > 0;
        if (covered) continue;
        std::uniform_int_distribution<int> row(0, n - 1);
        int i = row(rng);
        std::int64_t v = *std::max_element(values[i].begin(), values[i].end());
        values[i][j] = v;
      }
      break;
    }
    case Family::Positive:
      for (auto& row : values)
        for (auto& v : row) v = positive(rng);
      break;
    case Family::Identical: {
      // the shared row must be strictly positive: a zero column would leave
      // that good valued by no one
      std::vector<std::int64_t> row(m);
      for (auto& v : row) v = positive(rng);
      for (auto& r : values) r = row;
      break;
    }
  }
  return instance_from_rows(values);
}

}  // namespace fairdiv
