#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"

using namespace hierarb;

namespace {

StateSpace two_states() { return StateSpace({"up", "down"}, {Rational(1, 2), Rational(1, 2)}); }

std::vector<Agent> two_agents() {
  return {Agent{"a", {Portfolio{{1, 0}}, Portfolio{{0, 1}}, Portfolio{{1, 1}}}},
          Agent{"b", {Portfolio{{2, 0}}, Portfolio{{0, 2}}}}};
}

AggregationMap constant_map() {
  return AggregationMap(AggregationSpec{"c", AggregationSpec::Constant{{1, 1}}}, two_states(), two_agents());
}

AggregationMap injective_map() {
  return AggregationMap(AggregationSpec{"i", AggregationSpec::Injective{{1, 1}, 0, Rational(1, 16)}}, two_states(),
                        two_agents());
}

// Tabular map with sdf chosen per profile from a label in {0, 1}.
AggregationMap labelled(const std::vector<int>& labels) {
  const ProfileSpace ps({3, 2});
  AggregationSpec::Tabular t;
  for (std::size_t idx = 0; idx < ps.size(); ++idx) {
    t.entries.emplace_back(ps.profile(idx), RationalVector{1, labels[idx] ? Rational(3, 2) : Rational(1)});
  }
  return AggregationMap(AggregationSpec{"t", t}, two_states(), two_agents());
}

}  // namespace

TEST_CASE("profile space indexing") {
  const ProfileSpace ps({3, 2});
  CHECK(ps.size() == 6);
  for (std::size_t idx = 0; idx < ps.size(); ++idx) CHECK(ps.index(ps.profile(idx)) == idx);
  CHECK(ps.with_fixed(0, 1).size() == 2);
  CHECK(ps.with_fixed(1, 0).size() == 3);
  CHECK(ps.product(0, 2, {{0, 1, 2}, {1}}) == std::vector<Profile>{{2, 1}});
  CHECK_FALSE(ps.contains({3, 0}));
  CHECK(with_strategy({0, 1}, 0, 2) == Profile{2, 1});
}

TEST_CASE("constant map pools every opponent profile") {
  const auto f = constant_map();
  CHECK(f.kind() == AggregationKind::Constant);
  CHECK_FALSE(f.is_injective());
  const auto fibre = invert_at(f, 0, {1, 0});
  CHECK(fibre.profiles == std::vector<Profile>{{1, 0}, {1, 1}});
  const auto fibre_b = invert_at(f, 1, {0, 1});
  CHECK(fibre_b.profiles.size() == 3);
}

TEST_CASE("injective map inverts to a single profile") {
  const auto f = injective_map();
  CHECK(f.is_injective());
  const ProfileSpace& ps = f.profiles();
  for (std::size_t idx = 0; idx < ps.size(); ++idx) {
    const Profile p = ps.profile(idx);
    CHECK(f.aggregate(p).values() == RationalVector{1 + Rational(static_cast<long>(idx), 16), 1});
    for (std::size_t i = 0; i < 2; ++i) CHECK(invert_at(f, i, p).profiles == std::vector<Profile>{p});
  }
}

TEST_CASE("unattained sdf has an empty inversion") {
  const auto f = constant_map();
  const auto other = Sdf::create({2, 2}, two_states());
  CHECK(invert(f, other, 0, 0).empty());
}

TEST_CASE("invalid maps are rejected") {
  CHECK_THROWS_AS(AggregationMap(AggregationSpec{"i", AggregationSpec::Injective{{1, 1}, 0, 0}}, two_states(), two_agents()),
                  DomainError);
  // Impact factor 1 - 1 * demand becomes non-positive.
  CHECK_THROWS_AS(AggregationMap(AggregationSpec{"d", AggregationSpec::DemandImpact{{1, 1}, {{-1, -1}, {0, 0}}}},
                                 two_states(), two_agents()),
                  DomainError);
  AggregationSpec::Tabular missing;
  missing.entries.emplace_back(Profile{0, 0}, RationalVector{1, 1});
  CHECK_THROWS_AS(AggregationMap(AggregationSpec{"t", missing}, two_states(), two_agents()), DomainError);
}

TEST_CASE("demand impact scales the base by aggregate holdings") {
  // Demand for the bond at (0, 0) is 1 + 2 = 3; factor 1 + 3/8 in state up.
  const AggregationMap f(AggregationSpec{"d", AggregationSpec::DemandImpact{{1, 1}, {{Rational(1, 8), 0}, {0, 0}}}},
                         two_states(), two_agents());
  CHECK(f.aggregate({0, 0}).values() == RationalVector{Rational(11, 8), 1});
  CHECK(f.aggregate({1, 1}).values() == RationalVector{1, 1});
}

TEST_CASE("serial and parallel inversion agree") {
  for (const auto& f : {constant_map(), injective_map(), labelled({0, 1, 1, 0, 1, 0})}) {
    const ProfileSpace& ps = f.profiles();
    for (std::size_t idx = 0; idx < ps.size(); ++idx) {
      const Profile p = ps.profile(idx);
      for (std::size_t i = 0; i < 2; ++i) {
        CHECK(invert_at(f, i, p, Execution::Serial).profiles == invert_at(f, i, p, Execution::Parallel).profiles);
      }
    }
  }
}

TEST_CASE("responsiveness orders maps by fibre inclusion") {
  const auto c = constant_map();
  const auto inj = injective_map();
  CHECK(compare_responsiveness(c, inj) == Responsiveness::SecondAtLeastFirst);
  CHECK(compare_responsiveness(inj, c) == Responsiveness::FirstAtLeastSecond);
  CHECK(compare_responsiveness(c, c) == Responsiveness::Equal);
  // Profile order: (0,0) (1,0) (2,0) (0,1) (1,1) (2,1).
  // The first map pools (0,0) with (1,0) and (0,1) with (1,1); the second pools (1,0) with (2,0).
  const auto f1 = labelled({0, 0, 1, 1, 1, 0});
  const auto f2 = labelled({0, 1, 1, 0, 1, 0});
  CHECK(compare_responsiveness(f1, f2) == Responsiveness::Incomparable);
  CHECK(responsiveness_name(Responsiveness::Incomparable) == "incomparable");
}
