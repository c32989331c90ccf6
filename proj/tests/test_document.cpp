#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"

using namespace hierarb;

namespace {

const char* kMinimal = R"({
  "version": "1",
  "states": [{"label": "only", "prob": "1"}],
  "assets": {"payoffs": [["1"]], "risk_free_index": 0, "gross_rate": "1"},
  "agents": [{"name": "solo", "strategies": [["1"]]}],
  "aggregation": {"kind": "constant", "sdf": ["1/2"]}
})";

std::string error_of(const std::string& text) {
  try {
    parse_scenario(text, "doc.json");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("round trip is the identity on every frozen document") {
  for (const char* name : {"ladder_k3.json", "arbitrage.json", "cycle.json", "one_step.json", "staircase.json",
                           "coordination.json"}) {
    const auto sc = data_scenario(name);
    const Json once = scenario_to_json(sc);
    const Json twice = scenario_to_json(parse_scenario(dump(once)));
    CHECK_MESSAGE(once == twice, name);
  }
  const auto minimal = parse_scenario(kMinimal);
  CHECK(dump(scenario_to_json(parse_scenario(dump(scenario_to_json(minimal))))) == dump(scenario_to_json(minimal)));
}

TEST_CASE("floats are rejected with the line of the offending value") {
  std::string text = kMinimal;
  text.replace(text.find("\"prob\": \"1\""), 11, "\"prob\": 0.5");
  const std::string msg = error_of(text);
  CHECK(msg.find("exact rational required") != std::string::npos);
  CHECK(msg.find("doc.json:3:") == 0);
  CHECK(msg.find("/states/0/prob") != std::string::npos);
}

TEST_CASE("schema errors") {
  std::string unknown = kMinimal;
  unknown.replace(unknown.find("\"version\""), 9, "\"colour\": 1, \"version\"");
  CHECK(error_of(unknown).find("colour") != std::string::npos);

  std::string bad_sum = kMinimal;
  bad_sum.replace(bad_sum.find("\"prob\": \"1\""), 11, "\"prob\": \"1/2\"");
  CHECK(error_of(bad_sum).find("doc.json:3:") == 0);

  CHECK_FALSE(error_of("{ not json").empty());
  CHECK_FALSE(error_of(R"({"version": "1"})").empty());

  std::string bad_mode = kMinimal;
  bad_mode.replace(bad_mode.rfind('}'), 1, R"(, "flags": {"mode": "sometimes"}})");
  CHECK(error_of(bad_mode).find("sometimes") != std::string::npos);

  std::string dup = kMinimal;
  dup.replace(dup.find("[{\"name\": \"solo\""), 1, R"([{"name": "solo", "strategies": [["2"]]}, )");
  CHECK_FALSE(error_of(dup).empty());
}

TEST_CASE("profiles") {
  CHECK(parse_profile("0,2,1") == Profile{0, 2, 1});
  CHECK(parse_profile("3") == Profile{3});
  CHECK_THROWS_AS(parse_profile("0,a"), ConfigError);
  CHECK_THROWS_AS(parse_profile(""), ConfigError);
  CHECK_THROWS_AS(parse_profile("-1"), ConfigError);
  CHECK(profile_string({1, 0}) == "(1,0)");
}

TEST_CASE("ladder output is byte-stable") {
  const auto sc = data_scenario("ladder_k3.json");
  const std::string got = dump(ladder_to_json(compute_ladder(sc, DominanceMode::Uniform), sc));
  CHECK(got == read_text(data_path("ladder_k3.ladder.json")));
}

TEST_CASE("trace output carries the order jump") {
  const auto sc = data_scenario("staircase.json");
  auto trace = run(sc, {3, 5}, 100);
  annotate_order_jumps(trace, compute_ladder(sc, DominanceMode::Uniform), sc);
  const Json doc = trace_to_json(trace, sc);
  CHECK(doc["status"] == "no_arbitrage");
  CHECK(doc["steps"][0]["alpha"]["kind"] == "value");
  CHECK(doc["steps"][0]["alpha"]["value"] == 3);
}
