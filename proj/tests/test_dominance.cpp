#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"

using namespace hierarb;

namespace {

// Agent "row" holds 1, 2 or 3 bonds; its gains against "col" = 0 / 1 are
//   1 bond: (1, 1), 2 bonds: (2, 0), 3 bonds: (0, 2)   (in hundredths)
// so the 1-bond strategy is beaten against each column separately but by a
// different strategy each time.
const char* kSplit = R"([{"name": "row", "strategies": [["1"], ["2"], ["3"]]},
                         {"name": "col", "strategies": [["1"], ["2"]]}])";
const char* kSplitEntries = R"([
  {"profile": [0, 0], "sdf": ["99/100"]}, {"profile": [0, 1], "sdf": ["99/100"]},
  {"profile": [1, 0], "sdf": ["99/100"]}, {"profile": [1, 1], "sdf": ["1"]},
  {"profile": [2, 0], "sdf": ["1"]},      {"profile": [2, 1], "sdf": ["149/150"]}])";

StrategySet grid(std::size_t n) {
  StrategySet s;
  for (std::size_t k = 0; k < n; ++k) s.push_back(k);
  return s;
}

}  // namespace

TEST_CASE("split instance gains") {
  const auto sc = parse_scenario(bond_market(kSplit, kSplitEntries));
  CHECK(sc.gain(0, Profile{0, 0}) == RationalVector{Rational(1, 100)});
  CHECK(sc.gain(0, Profile{1, 1}) == RationalVector{0});
  CHECK(sc.gain(0, Profile{2, 1}) == RationalVector{Rational(2, 100)});
}

TEST_CASE("uniform and pointwise quantifiers differ") {
  const auto sc = parse_scenario(bond_market(kSplit, kSplitEntries));
  const auto opp = sc.profiles().with_fixed(0, 0);
  CHECK(dominated_set(sc, 0, opp, grid(3), DominanceMode::Uniform).empty());
  CHECK(dominated_set(sc, 0, opp, grid(3), DominanceMode::Pointwise) == StrategySet{0});
  CHECK(dominates(sc, 0, 1, 0, {{0, 0}}));
  CHECK_FALSE(dominates(sc, 0, 1, 0, {{0, 0}, {0, 1}}));
  CHECK(dominates(sc, 0, 2, 0, {{0, 1}}));
  CHECK_FALSE(dominates(sc, 0, 0, 0, {{0, 1}}));
  CHECK_THROWS_AS(dominates(sc, 0, 1, 0, {}), DomainError);
}

TEST_CASE("serial and parallel dominated sets agree") {
  const auto sc = parse_scenario(bond_market(kSplit, kSplitEntries));
  for (auto mode : {DominanceMode::Uniform, DominanceMode::Pointwise}) {
    for (std::size_t i = 0; i < 2; ++i) {
      const auto opp = sc.profiles().with_fixed(i, 0);
      const auto n = sc.profiles().grid_size(i);
      CHECK(dominated_set(sc, i, opp, grid(n), mode, Execution::Serial) ==
            dominated_set(sc, i, opp, grid(n), mode, Execution::Parallel));
    }
  }
}

TEST_CASE("golden ladder with one elimination in each of two rounds") {
  const auto sc = data_scenario("ladder_k3.json");
  const Ladders l = compute_ladder(sc, DominanceMode::Uniform);
  REQUIRE(l.K == 3);
  CHECK(l.agents[0].levels == std::vector<StrategySet>{{0, 1, 2}, {0, 1}, {0, 1}, {0, 1}});
  CHECK(l.agents[0].dominated == std::vector<StrategySet>{{2}, {}, {}});
  CHECK(l.agents[1].levels == std::vector<StrategySet>{{0, 1, 2}, {0, 1, 2}, {0, 2}, {0, 2}});
  CHECK(l.agents[1].dominated == std::vector<StrategySet>{{}, {1}, {}});
  CHECK(l.agents[0].eliminating_rounds() == 1);
  CHECK(l.agents[1].eliminating_rounds() == 1);

  CHECK(classify_order(2, l.agents[0]) == HierarchyOrder{false, 0});
  CHECK(classify_order(1, l.agents[1]) == HierarchyOrder{false, 1});
  CHECK(classify_order(0, l.agents[0]) == HierarchyOrder{true, 0});
  CHECK(order_string(classify_order(1, l.agents[1])) == "1");
  CHECK(order_string(classify_order(0, l.agents[1])) == "infinite");
  CHECK(l.agents[0].level(10) == l.agents[0].stabilized());
}

TEST_CASE("staircase ladder removes one strategy per agent per round") {
  const auto sc = data_scenario("staircase.json");
  const Ladders l = compute_ladder(sc, DominanceMode::Uniform);
  CHECK(l.K == 8);
  for (std::size_t k = 0; k < 7; ++k) CHECK(l.agents[0].dominated[k] == StrategySet{k});
  for (std::size_t k = 0; k < 6; ++k) CHECK(l.agents[1].dominated[k] == StrategySet{k});
  CHECK(l.agents[0].stabilized() == StrategySet{7});
  CHECK(l.agents[1].stabilized() == StrategySet{6});
}

TEST_CASE("trivial ladders") {
  const auto one = parse_scenario(bond_market(R"([{"name": "solo", "strategies": [["1"]]}])",
                                              R"([{"profile": [0], "sdf": ["1/2"]}])"));
  const Ladders l = compute_ladder(one, DominanceMode::Uniform);
  CHECK(l.K == 1);
  CHECK(l.agents[0].levels == std::vector<StrategySet>{{0}, {0}});
  CHECK(l.agents[0].dominated == std::vector<StrategySet>{{}});

  const auto split = parse_scenario(bond_market(kSplit, kSplitEntries));
  const Ladders u = compute_ladder(split, DominanceMode::Uniform);
  CHECK(u.K == 1);
  const Ladders p = compute_ladder(split, DominanceMode::Pointwise);
  CHECK(p.K >= 2);
  CHECK(p.agents[0].dominated[0] == StrategySet{0});
}

TEST_CASE("opponent products and set relations") {
  const auto sc = data_scenario("ladder_k3.json");
  const Ladders l = compute_ladder(sc, DominanceMode::Uniform);
  // Agent 0 anchored at 0: opponents range over agent 1's UD^2 = {0, 2}.
  CHECK(opponent_product(l, sc.profiles(), 0, 0, 2) == std::vector<Profile>{{0, 0}, {0, 2}});
  CHECK(opponent_product(l, sc.profiles(), 0, 0, -1) == opponent_product(l, sc.profiles(), 0, 0, 0));
  const std::vector<Profile> a{{0, 0}, {0, 1}};
  const std::vector<Profile> b{{0, 0}};
  const std::vector<Profile> c{{0, 2}};
  CHECK(compare_sets(a, a) == SetRelation::Equal);
  CHECK(compare_sets(b, a) == SetRelation::StrictSubset);
  CHECK(compare_sets(a, b) == SetRelation::StrictSuperset);
  CHECK(compare_sets(a, c) == SetRelation::Incomparable);
}

TEST_CASE("dominated with respect to prices") {
  const auto sc = data_scenario("arbitrage.json");
  const auto witness = dominated_wrtp_at(sc, 0, {2, 0});
  REQUIRE(witness.has_value());
  CHECK(*witness == 1);
  const auto other = Sdf::create({7, 7}, sc.space());
  CHECK_THROWS_AS(dominated_wrtp(sc, 0, 2, other), DomainError);

  // With the one-to-one coordination map the opponent is revealed, so the
  // miscoordinated agent can always switch.
  const auto coord = data_scenario("coordination.json");
  CHECK(dominated_wrtp_at(coord, 0, {0, 1}) == std::optional<std::size_t>{1});
  CHECK(dominated_wrtp_at(coord, 1, {0, 1}) == std::optional<std::size_t>{0});
  CHECK_FALSE(dominated_wrtp_at(coord, 0, {1, 1}).has_value());
}
