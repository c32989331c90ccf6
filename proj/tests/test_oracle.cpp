#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <omp.h>

#include "helpers.hpp"
#include "hierarb/oracle.hpp"

using namespace hierarb;

namespace {

InstanceBounds small_bounds(std::size_t n) {
  InstanceBounds b;
  b.scenarios = n;
  return b;
}

}  // namespace

TEST_CASE("generation is deterministic and index-independent") {
  const auto b = small_bounds(10);
  const auto all = enumerate_scenarios(b);
  for (std::size_t k = 0; k < all.size(); ++k) {
    CHECK(dump(scenario_to_json(all[k])) == dump(scenario_to_json(generate_scenario(b, k))));
  }
  auto other = b;
  other.seed = 2;
  CHECK(dump(scenario_to_json(generate_scenario(other, 0))) != dump(scenario_to_json(all[0])));
}

TEST_CASE("generated scenarios respect the bounds") {
  const auto b = small_bounds(200);
  std::size_t injective = 0;
  for (const auto& sc : enumerate_scenarios(b)) {
    CHECK(sc.space().size() <= b.max_states);
    CHECK(sc.assets().count() <= b.max_assets);
    CHECK(sc.agent_count() <= b.max_agents);
    for (std::size_t i = 0; i < sc.agent_count(); ++i) CHECK(sc.profiles().grid_size(i) <= b.max_grid);
    injective += sc.map().is_injective() ? 1 : 0;
  }
  CHECK(injective >= 50);
}

TEST_CASE("bounds round trip and validation") {
  InstanceBounds b;
  b.scenarios = 7;
  b.sdf_pool = {Rational(1, 3)};
  const auto back = bounds_from_json(dump(bounds_to_json(b)));
  CHECK(dump(bounds_to_json(back)) == dump(bounds_to_json(b)));
  CHECK_THROWS_AS(bounds_from_json(R"({"scenarios": 0})"), ConfigError);
  CHECK_THROWS_AS(bounds_from_json(R"({"sdf_pool": [0.5]})"), ConfigError);
  CHECK_THROWS_AS(bounds_from_json(R"({"colour": 1})"), ConfigError);
}

TEST_CASE("equivalence, sufficiency and structure hold on generated scenarios") {
  const auto report = run_suite(enumerate_scenarios(small_bounds(60)), 1);
  CHECK(report.scenarios == 60);
  for (const char* claim : {"arbitrage_equivalence", "sufficiency", "ladder_nesting", "ladder_partition",
                            "stabilization_rounds", "inversion_roundtrip", "disjoint_fibres", "arbitrage_exclusivity",
                            "kernel_agreement", "uniform_within_pointwise", "tatonnement_terminal",
                            "responsiveness_monotone", "order_jump_nonnegative"}) {
    CAPTURE(claim);
    const auto& t = report.claims.at(claim);
    CHECK(t.fail == 0);
    CHECK(t.pass > 0);
  }
}

TEST_CASE("trivial bounds give a clean report") {
  InstanceBounds b;
  b.scenarios = 5;
  b.max_states = b.max_assets = b.max_agents = b.max_grid = 1;
  const auto report = run_suite(enumerate_scenarios(b), 1);
  CHECK(report.failures() == 0);
  CHECK(report.claims.at("arbitrage_equivalence").pass == 0);
  CHECK(report.claims.at("arbitrage_equivalence").vacuous == 5);
}

TEST_CASE("coordination instance breaks the stabilized branch") {
  const auto sc = data_scenario("coordination.json");
  const Ladders l = compute_ladder(sc, DominanceMode::Uniform);
  CHECK(is_eductive(l, {0, 1}));
  ClaimTally first, second, gap;
  std::vector<std::string> c1, c2;
  verify_conditions(sc, {0, 1}, l, first, second, gap, c1, c2);
  CHECK(first.fail == 1);
  CHECK(first.notes.at("all_stabilized_with_arbitrage") == 1);
  CHECK(second.vacuous == 1);

  ClaimTally inj;
  std::vector<std::string> ci;
  verify_injective(sc, l, inj, ci);
  CHECK(inj.fail == 2);  // both miscoordinated profiles
  CHECK(inj.pass == 2);

  ClaimTally eq;
  std::vector<std::string> ce;
  verify_arbitrage_equivalence(sc, {0, 1}, eq, ce);
  CHECK(eq.pass == 1);
  CHECK(eq.fail == 0);
}

TEST_CASE("profile facts match hand analysis") {
  const auto sc = data_scenario("coordination.json");
  const auto f = profile_facts(sc, {0, 1});
  CHECK(f.arbitrage);
  CHECK(f.fibres[0] == std::vector<Profile>{{0, 1}});
  CHECK(f.improver[0] == std::optional<std::size_t>{1});
  CHECK_FALSE(profile_facts(sc, {1, 1}).arbitrage);
}

TEST_CASE("minimal order and responsiveness on the staircase") {
  const auto sc = data_scenario("staircase.json");
  const Ladders l = compute_ladder(sc, DominanceMode::Uniform);
  // One-to-one map: the fibre is a single profile, which strictly contains
  // no product of two or more opponent strategies; UD^6 of agent 1 is {6}.
  CHECK_FALSE(minimal_order(sc.map(), l, 0, {3, 5}).has_value());
  const AggregationMap constant(AggregationSpec{"c", AggregationSpec::Constant{sc.map().aggregate_index(0).values()}},
                                sc.space(), sc.agents());
  CHECK(minimal_order(constant, l, 0, {3, 5}) == std::optional<std::size_t>{1});
  ClaimTally t;
  std::vector<std::string> cex;
  verify_responsiveness(constant, sc.map(), l, t, cex);
  CHECK(t.pass == 1);
  CHECK(t.fail == 0);
}

TEST_CASE("order jump check on the staircase run") {
  const auto sc = data_scenario("staircase.json");
  const Ladders l = compute_ladder(sc, DominanceMode::Uniform);
  ClaimTally t;
  std::vector<std::string> cex;
  verify_order_jumps(sc, run(sc, {3, 5}, 100), l, t, cex);
  CHECK(t.pass + t.fail + t.skipped + t.gap == 3);
}

TEST_CASE("reports do not depend on the thread count") {
  const auto scenarios = enumerate_scenarios(small_bounds(40));
  omp_set_num_threads(1);
  const std::string one = dump(report_to_json(run_suite(scenarios, 3)));
  omp_set_num_threads(4);
  const std::string four = dump(report_to_json(run_suite(scenarios, 3)));
  CHECK(one == four);
}
