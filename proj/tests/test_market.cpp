#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"

using namespace hierarb;

namespace {

StateSpace two_states() { return StateSpace({"up", "down"}, {Rational(1, 2), Rational(1, 2)}); }

AssetSet bond_and_stock(const StateSpace& space, Rational gross = 1) {
  return AssetSet({{1, 1}, {2, 0}}, 0, gross, space);
}

std::string two_state_doc(const std::string& extra, const std::string& gross = "1") {
  return R"({"version": "1",
    "states": [{"label": "up", "prob": "1/2"}, {"label": "down", "prob": "1/2"}],
    "assets": {"payoffs": [["1", "1"], ["2", "0"]], "risk_free_index": 0, "gross_rate": ")" + gross + R"("},
    "agents": [{"name": "a", "strategies": [["1", "0"], ["0", "1"], ["1", "1"]]}],
    "aggregation": {"kind": "constant", "sdf": ["1", "1"]})" + extra + "}";
}

}  // namespace

TEST_CASE("state space validation") {
  CHECK_THROWS_AS(StateSpace({"a", "b"}, {Rational(1, 2), Rational(1, 3)}), DomainError);
  CHECK_THROWS_AS(StateSpace({"a", "a"}, {Rational(1, 2), Rational(1, 2)}), DomainError);
  CHECK_THROWS_AS(StateSpace({"a", "b"}, {Rational(3, 2), Rational(-1, 2)}), DomainError);
  const StateSpace s({"a", "b", "c"}, {Rational(1, 2), Rational(0), Rational(1, 2)});
  CHECK(s.support() == std::vector<std::size_t>{0, 2});
}

TEST_CASE("asset set validation") {
  const auto space = two_states();
  CHECK_THROWS_AS(AssetSet({{1, 2}}, 0, 1, space), DomainError);   // risk-free not constant
  CHECK_THROWS_AS(AssetSet({{1, 1}}, 1, 1, space), DomainError);   // index out of range
  CHECK_THROWS_AS(AssetSet({{1, 1}}, 0, 0, space), DomainError);   // gross rate
  CHECK_THROWS_AS(AssetSet({{1, 1}, {-1, 0}}, 0, 1, space), DomainError);
}

TEST_CASE("pricing is the probability-weighted sdf expectation") {
  const auto space = two_states();
  const auto assets = bond_and_stock(space);
  const auto q = price_assets(Sdf::create({1, 1}, space), assets, space);
  CHECK(q.prices == RationalVector{1, 1});
  const auto q2 = price_assets(Sdf::create({Rational(3, 2), Rational(1, 2)}, space), assets, space);
  CHECK(q2.prices == RationalVector{1, Rational(3, 2)});
  CHECK(discount_factor(Sdf::create({Rational(3, 2), Rational(1, 2)}, space), space) == 1);
  CHECK_THROWS_AS(Sdf::create({0, 0}, space), DomainError);
  CHECK_THROWS_AS(Sdf::create({1}, space), DomainError);
}

TEST_CASE("arbitrage payout test reads only the support") {
  const StateSpace space({"a", "b"}, {Rational(1), Rational(0)});
  CHECK(is_arbitrage_payout(0, {1, 0}, space));
  CHECK_FALSE(is_arbitrage_payout(0, {0, 5}, space));
  CHECK_FALSE(is_arbitrage_payout(1, {2, 2}, space));
  CHECK_FALSE(is_arbitrage_payout(0, {-1, 9}, space));
}

TEST_CASE("find_arbitrage returns a repricing certificate for fair prices") {
  const auto space = two_states();
  const auto assets = bond_and_stock(space);
  const PriceVector q{{1, 1}};
  const auto found = find_arbitrage(q, assets, space);
  REQUIRE(std::holds_alternative<PositiveSdfCertificate>(found));
  const auto& m = std::get<PositiveSdfCertificate>(found).sdf;
  // The market is complete: the only repricing sdf is (1, 1).
  CHECK(m.values() == RationalVector{1, 1});
  CHECK(certificate_reprices(m, q, assets, space));
  CHECK(grid_arbitrages(q, assets, space, 2).empty());
}

TEST_CASE("find_arbitrage returns a portfolio when the stock is overpriced") {
  const auto space = two_states();
  const auto assets = bond_and_stock(space);
  const PriceVector q{{1, 2}};  // implied sdf (2, 0) is not strictly positive
  const auto found = find_arbitrage(q, assets, space);
  REQUIRE(std::holds_alternative<Portfolio>(found));
  CHECK(classical_arbitrage_check(std::get<Portfolio>(found), q, assets, space));
  // Two bonds against one short stock: cost 0, payout (0, 2).
  CHECK(classical_arbitrage_check(Portfolio{{2, -1}}, q, assets, space));
  const auto grid = grid_arbitrages(q, assets, space, 2);
  CHECK(std::find(grid.begin(), grid.end(), Portfolio{{2, -1}}) != grid.end());
}

TEST_CASE("free asset is an arbitrage") {
  const auto space = two_states();
  const auto assets = bond_and_stock(space);
  const PriceVector q{{1, 0}};
  CHECK(std::holds_alternative<Portfolio>(find_arbitrage(q, assets, space)));
  CHECK(classical_arbitrage_check(Portfolio{{0, 1}}, q, assets, space));
}

TEST_CASE("net gain is payout minus funded cost") {
  // Holding (1, 1) costs 2 at m = (1, 1); payout is (3, 1).
  const auto r1 = parse_scenario(two_state_doc(""));
  CHECK(net_gain(r1, 0, {2}).gain == RationalVector{1, -1});
  CHECK(r1.gain(0, Profile{2}) == RationalVector{1, -1});
  CHECK(utility(r1, 0, {2}, 1) == -1);

  // Gross rate 2: funding 2 costs 4 at maturity.
  const auto r2 = parse_scenario(two_state_doc("", "2"));
  CHECK(net_gain(r2, 0, {2}).gain == RationalVector{-1, -3});

  // Funding curve: borrowing 2 (amount -2) is discounted at 1/4.
  const auto r3 = parse_scenario(two_state_doc(
      R"(, "risk_free_sdf": {"default_discount": "1", "table": [{"amount": "-2", "discount": "1/4"}]})"));
  CHECK(net_gain(r3, 0, {2}).gain == RationalVector{-5, -7});
  CHECK(net_gain(r3, 0, {0}).gain == RationalVector{0, 0});
}

TEST_CASE("trade plan replicates the gain difference at zero cost") {
  const auto sc = parse_scenario(two_state_doc(""));
  // From the bond (gain 0, 0) to the stock (gain 1, -1).
  const TradePlan plan = assemble_trade_plan(sc, 0, 0, 1, {0});
  CHECK(plan.cost == 0);
  CHECK(plan.payout == RationalVector{1, -1});
  CHECK(plan.legs.size() == 4);
  CHECK_FALSE(plan_is_arbitrage(plan, sc.space()));
  CHECK_THROWS_AS(build_arbitrage_portfolio(sc, 0, 0, 1, {0}), DomainError);
}
