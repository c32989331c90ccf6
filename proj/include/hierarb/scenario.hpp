#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hierarb/aggregation.hpp"
#include "hierarb/market.hpp"
#include "hierarb/profile.hpp"

namespace hierarb {

enum class DominanceMode { Uniform, Pointwise };

std::string mode_name(DominanceMode mode);
DominanceMode parse_mode(const std::string& text);

struct ScenarioFlags {
  DominanceMode mode = DominanceMode::Uniform;
  std::size_t max_steps = 100;
  std::string tie_break = "lexicographic";
  std::uint64_t seed = 0;
  int grid_bound = 2;  // integer portfolio grid for the brute-force arbitrage cross-check

  bool operator==(const ScenarioFlags&) const = default;
};

/// The market tuple: states, assets, agents with finite strategy grids, the
/// aggregation map and the risk-free funding curve. Immutable once built.
class MarketScenario {
 public:
  MarketScenario(StateSpace space, AssetSet assets, std::vector<Agent> agents, AggregationSpec aggregation,
                 std::optional<RiskFreeCurve> risk_free = std::nullopt, ScenarioFlags flags = {});

  const StateSpace& space() const { return space_; }
  const AssetSet& assets() const { return assets_; }
  const std::vector<Agent>& agents() const { return agents_; }
  const Agent& agent(std::size_t i) const { return agents_.at(i); }
  std::size_t agent_count() const { return agents_.size(); }
  const AggregationMap& map() const { return map_; }
  const ProfileSpace& profiles() const { return map_.profiles(); }
  const RiskFreeCurve& risk_free() const { return risk_free_; }
  bool has_custom_risk_free() const { return custom_risk_free_; }
  const ScenarioFlags& flags() const { return flags_; }

  /// Cached net gain of `agent` at the profile with the given index.
  const RationalVector& gain(std::size_t agent, std::size_t profile_index) const {
    return gains_[agent][profile_index];
  }
  const RationalVector& gain(std::size_t agent, const Profile& p) const {
    return gains_[agent][profiles().index(p)];
  }

  /// Same market with a different aggregation map.
  MarketScenario with_aggregation(AggregationSpec aggregation) const;
  MarketScenario with_flags(ScenarioFlags flags) const;

 private:
  StateSpace space_;
  AssetSet assets_;
  std::vector<Agent> agents_;
  AggregationMap map_;
  RiskFreeCurve risk_free_;
  bool custom_risk_free_ = false;
  ScenarioFlags flags_;
  std::vector<std::vector<RationalVector>> gains_;
};

/// g(s) = a_i.x(s) - (a_i.q) / D(-a_i.q), with q priced by the sdf that the
/// map produces at `profile` and D the risk-free discount for that funding
/// amount. Computed directly, without the cache.
GainProfile net_gain(const MarketScenario& scenario, std::size_t agent, const Profile& profile);

/// Identity of the net gain in state s.
Rational utility(const MarketScenario& scenario, std::size_t agent, const Profile& profile,
                 std::size_t state);

struct TradeLeg {
  std::string label;
  Rational cost;
  RationalVector payout;  // per state
};

/// Zero-cost replication of switching from a_i to a_star at one opponent
/// profile: long a_star, short a_i, borrow the cost of a_star and lend the
/// proceeds of a_i at the risk-free rate.
struct TradePlan {
  std::size_t agent = 0;
  std::size_t from = 0;
  std::size_t to = 0;
  Profile profile;  // opponents as in the realized profile, slot `agent` = from
  std::vector<TradeLeg> legs;
  Rational cost;
  RationalVector payout;
};

TradePlan assemble_trade_plan(const MarketScenario& scenario, std::size_t agent, std::size_t from,
                              std::size_t to, const Profile& profile);

/// True iff the plan has cost <= 0, payout >= 0 on the support and > 0 in some
/// support state.
bool plan_is_arbitrage(const TradePlan& plan, const StateSpace& space);

struct ArbitragePlan {
  TradePlan realized;
  std::vector<TradePlan> consistent;  // one per profile in the inversion set, canonical order
};

/// Builds the plan after checking that `to` improves on `from` against every
/// opponent profile consistent with the sdf observed at `profile`. Throws
/// DomainError naming the failing profile and state otherwise.
ArbitragePlan build_arbitrage_portfolio(const MarketScenario& scenario, std::size_t agent,
                                        std::size_t from, std::size_t to, const Profile& profile);

}  // namespace hierarb
