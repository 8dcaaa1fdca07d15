#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "fairdiv/io.hpp"

using namespace fairdiv;

TEST_CASE("instance round-trip and canonicalization") {
  InstanceFile file{instance_from_rows({{2, 1, 3}, {1, 2, 1}}), "e1", "random",
                    std::uint64_t{7}};
  std::string text = serialize_instance_file(file);
  InstanceFile back = parse_instance_file(text);
  CHECK(back.instance.values() == file.instance.values());
  CHECK(back.name == file.name);
  CHECK(back.family == file.family);
  CHECK(back.seed == file.seed);
  CHECK(serialize_instance_file(back) == text);  // parse-serialize fixpoint

  // non-canonical key order parses to the same canonical form
  std::string shuffled = R"({"valuations":[[2,1,3],[1,2,1]],"goods":3,)"
                         R"("agents":2,"schemaVersion":1,"name":"e1",)"
                         R"("family":"random","seed":7})";
  CHECK(serialize_instance_file(parse_instance_file(shuffled)) == text);
}

TEST_CASE("strict instance parsing") {
  CHECK_THROWS_AS(parse_instance_file("not json"), ParseError);
  CHECK_THROWS_AS(parse_instance_file("[1,2]"), ParseError);
  CHECK_THROWS_AS(parse_instance_file(
                      R"({"schemaVersion":99,"agents":1,"goods":1,"valuations":[[1]]})"),
                  ParseError);
  CHECK_THROWS_AS(parse_instance_file(
                      R"({"schemaVersion":1,"agents":2,"goods":2,"valuations":[[1,1]]})"),
                  ParseError);  // row count mismatch
  CHECK_THROWS_AS(parse_instance_file(
                      R"({"schemaVersion":1,"agents":2,"goods":2,"valuations":[[1,1],[1]]})"),
                  ParseError);  // ragged
  CHECK_THROWS_AS(parse_instance_file(
                      R"({"schemaVersion":1,"agents":1,"goods":1,"valuations":[[1.5]]})"),
                  ParseError);  // non-integer
  CHECK_THROWS_AS(parse_instance_file(
                      R"({"schemaVersion":1,"agents":1,"goods":1,"valuations":[[-1]]})"),
                  ValidationError);
}

TEST_CASE("result round-trip with exact rational prices") {
  ResultFile result;
  result.bundles = {{0, 2}, {1}};
  result.prices = std::vector<Rational>{make_rational(7, 3), Rational(2),
                                        make_rational(22, 7)};
  result.checks.push_back({"ef1", "check_ef1", true, std::nullopt});
  result.checks.push_back({"fpo-lp", "check_fpo_lp", false, std::string("w")});
  result.stats.transfers = 3;
  result.stats.priceRises = 2;
  std::string text = serialize_result_file(result);
  ResultFile back = parse_result_file(text);
  CHECK(back.bundles == result.bundles);
  REQUIRE(back.prices.has_value());
  CHECK((*back.prices)[0] == make_rational(7, 3));
  CHECK((*back.prices)[2] == make_rational(22, 7));
  CHECK(back.checks.size() == 2);
  CHECK(back.checks[1].holds == false);
  CHECK(back.checks[1].detail == std::string("w"));
  CHECK(back.stats.transfers == 3);
  CHECK(serialize_result_file(back) == text);
}

TEST_CASE("generator determinism and family predicates") {
  for (std::uint64_t seed : {1ull, 7ull, 99ull}) {
    Instance a = generate(Family::Binary, 3, 6, 10, seed);
    Instance b = generate(Family::Binary, 3, 6, 10, seed);
    CHECK(a.values() == b.values());
    CHECK(a.vmax() == 1);  // binary: values in {0,1}

    Instance kary = generate(Family::Kary, 3, 6, 10, seed, 2);
    CHECK(kary.arity() <= 2);

    Instance pos = generate(Family::Positive, 3, 6, 10, seed);
    CHECK(pos.positive());

    Instance ident = generate(Family::Identical, 3, 6, 10, seed);
    for (int i = 1; i < ident.n(); ++i)
      for (int j = 0; j < ident.m(); ++j)
        CHECK(ident.value(i, j) == ident.value(0, j));

    Instance rand1 = generate(Family::Random, 3, 6, 10, seed);
    Instance rand2 = generate(Family::Random, 3, 6, 10, seed + 1);
    CHECK(rand1.values() != rand2.values());
  }
  CHECK_THROWS_AS(generate(Family::Random, 0, 3, 5, 1), InvalidParams);
  CHECK(family_from_string("kary") == Family::Kary);
  CHECK_FALSE(family_from_string("bogus").has_value());
  CHECK(family_to_string(Family::Positive) == "positive");
}

TEST_CASE("trace serialization smoke test") {
  TraceLog log;
  TraceEvent t;
  t.kind = TraceEvent::Kind::Transfer;
  t.good = 1;
  t.fromAgent = 0;
  t.toAgent = 1;
  log.events.push_back(t);
  TraceEvent r;
  r.kind = TraceEvent::Kind::PriceRise;
  r.trigger = TraceEvent::Trigger::Gamma2;
  r.beta = make_rational(3, 2);
  r.componentAgents = {0};
  r.componentGoods = {1, 2};
  log.events.push_back(r);
  std::string text = serialize_trace(log);
  CHECK(text.find("\"transfers\": 1") != std::string::npos);
  CHECK(text.find("\"beta\": \"3/2\"") != std::string::npos);
  CHECK(text.find("gamma2") != std::string::npos);
}
