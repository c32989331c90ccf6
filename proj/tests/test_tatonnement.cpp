#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"

using namespace hierarb;

TEST_CASE("state records dominated agents") {
  const auto sc = data_scenario("coordination.json");
  CHECK(make_state(sc, {0, 1}).dominated_agents == std::vector<std::size_t>{0, 1});
  CHECK(make_state(sc, {1, 1}).dominated_agents.empty());
  CHECK(make_state(sc, {1, 1}).sdf == sc.map().aggregate({1, 1}));
}

TEST_CASE("sequential step moves the lowest dominated agent") {
  const auto sc = data_scenario("coordination.json");
  std::vector<Revision> taken;
  const auto next = step(make_state(sc, {0, 1}), sc, RevisionPolicy::Sequential, &taken);
  REQUIRE(next.has_value());
  CHECK(next->profile == Profile{1, 1});
  CHECK(next->step == 1);
  REQUIRE(taken.size() == 1);
  CHECK(taken[0].agent == 0);
  CHECK(taken[0].from == 0);
  CHECK(taken[0].to == 1);
  CHECK_FALSE(step(*next, sc).has_value());
}

TEST_CASE("simultaneous step moves every dominated agent") {
  const auto sc = data_scenario("coordination.json");
  std::vector<Revision> taken;
  const auto next = step(make_state(sc, {0, 1}), sc, RevisionPolicy::Simultaneous, &taken);
  REQUIRE(next.has_value());
  CHECK(next->profile == Profile{1, 0});
  CHECK(taken.size() == 2);
}

TEST_CASE("already concluded run has no steps") {
  const auto sc = data_scenario("coordination.json");
  const auto trace = run(sc, {1, 1}, 10);
  CHECK(trace.steps.empty());
  CHECK(trace.status == TerminalStatus::NoArbitrage);
  CHECK(trace.terminal == Profile{1, 1});
}

TEST_CASE("one-step golden run") {
  const auto sc = data_scenario("one_step.json");
  const auto trace = run(sc, {0, 1}, 10);
  CHECK(trace.steps.size() == 1);
  CHECK(trace.status == TerminalStatus::NoArbitrage);
  CHECK(make_state(sc, trace.terminal).dominated_agents.empty());
}

TEST_CASE("cycle and step cap") {
  const auto sc = data_scenario("cycle.json");
  const auto trace = run(sc, {0, 0}, 100);
  CHECK(trace.status == TerminalStatus::CycleDetected);
  REQUIRE_FALSE(trace.steps.empty());
  // The last step returns to a profile seen before.
  bool revisit = trace.steps.back().after == trace.initial;
  for (const auto& s : trace.steps) revisit = revisit || s.before == trace.steps.back().after;
  CHECK(revisit);
  const auto capped = run(sc, {0, 0}, 1);
  CHECK(capped.status == TerminalStatus::MaxStepsExceeded);
  CHECK(capped.steps.size() == 1);
  CHECK_THROWS_AS(run(sc, {0, 0}, 0), DomainError);
}

TEST_CASE("staircase step jumps three orders") {
  const auto sc = data_scenario("staircase.json");
  auto trace = run(sc, {3, 5}, 100);
  const Ladders ladders = compute_ladder(sc, DominanceMode::Uniform);
  annotate_order_jumps(trace, ladders, sc);
  REQUIRE_FALSE(trace.steps.empty());
  const auto& first = trace.steps.front();
  CHECK(first.revisions.front().agent == 0);
  CHECK(first.after == Profile{6, 5});
  CHECK(first.order_before == HierarchyOrder{false, 3});
  CHECK(first.order_after == HierarchyOrder{false, 6});
  CHECK(first.alpha_kind == AlphaKind::Value);
  CHECK(first.alpha == 3);
  CHECK(trace.status == TerminalStatus::NoArbitrage);
}

TEST_CASE("order jump kinds") {
  const auto sc = data_scenario("staircase.json");
  const Ladders ladders = compute_ladder(sc, DominanceMode::Uniform);
  auto trace = run(sc, {3, 5}, 100);
  annotate_order_jumps(trace, ladders, sc);
  REQUIRE(trace.steps.size() >= 2);
  CHECK(trace.steps[1].alpha_kind == AlphaKind::ToInfinite);
  CHECK(alpha_kind_name(AlphaKind::WithinGrid) == "within_grid");
}
