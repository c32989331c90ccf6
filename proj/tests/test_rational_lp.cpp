#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hierarb/lp.hpp"

using namespace hierarb;

TEST_CASE("rational literals are exact") {
  CHECK(parse_rational("3/6") == Rational(1, 2));
  CHECK(parse_rational("-2") == Rational(-2));
  CHECK_THROWS_AS(parse_rational(" 7/3"), ConfigError);
  CHECK(to_string(Rational(4, 2)) == "2");
  CHECK(to_string(Rational(-1, 3)) == "-1/3");
  CHECK_FALSE(is_rational_literal("0.5"));
  CHECK_FALSE(is_rational_literal("1/0"));
  CHECK_THROWS_AS(parse_rational("0.5"), ConfigError);
  CHECK_THROWS_AS(parse_rational("1e3"), ConfigError);
}

TEST_CASE("dot product") {
  CHECK(dot({Rational(1, 2), Rational(2)}, {Rational(4), Rational(1, 4)}) == Rational(5, 2));
  CHECK_THROWS_AS(dot({Rational(1)}, {}), DomainError);
}

TEST_CASE("lp optimum on a bounded problem") {
  // max x + 2y  s.t.  x + y + s1 = 4,  y + s2 = 3
  const auto sol = lp::maximize({{1, 1, 1, 0}, {0, 1, 0, 1}}, {4, 3}, {1, 2, 0, 0});
  REQUIRE(sol.status == lp::Status::Optimal);
  CHECK(sol.objective == 7);
  CHECK(sol.x[0] == 1);
  CHECK(sol.x[1] == 3);
}

TEST_CASE("lp infeasible and unbounded") {
  CHECK(lp::maximize({{1}}, {-1}, {1}).status == lp::Status::Infeasible);
  CHECK(lp::maximize({{1, -1}}, {0}, {1, 0}).status == lp::Status::Unbounded);
}

TEST_CASE("lp degenerate problem terminates") {
  // Several constraints through the origin.
  const auto sol = lp::maximize({{1, -1, 1, 0, 0}, {-1, 1, 0, 1, 0}, {1, 1, 0, 0, 1}}, {0, 0, 2}, {1, 1, 0, 0, 0});
  REQUIRE(sol.status == lp::Status::Optimal);
  CHECK(sol.objective == 2);
}
