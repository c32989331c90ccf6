#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hierarb/document.hpp"
#include "hierarb/dominance.hpp"
#include "hierarb/scenario.hpp"
#include "hierarb/tatonnement.hpp"

namespace hierarb {

struct InstanceBounds {
  std::size_t scenarios = 500;
  std::size_t max_states = 3;
  std::size_t max_assets = 3;
  std::size_t max_agents = 3;
  std::size_t max_grid = 4;
  RationalVector payoff_pool{Rational(0), Rational(1), Rational(2), Rational(3)};
  RationalVector probability_weights{Rational(0), Rational(1), Rational(1), Rational(2)};
  RationalVector weight_pool{Rational(-1), Rational(0), Rational(1), Rational(2)};
  RationalVector sdf_pool{Rational(1, 2), Rational(1), Rational(3, 2), Rational(2)};
  RationalVector impact_pool{Rational(-1, 8), Rational(0), Rational(1, 8), Rational(1, 4)};
  RationalVector gross_rates{Rational(1), Rational(11, 10)};
  std::vector<AggregationKind> kinds{AggregationKind::Constant, AggregationKind::Injective,
                                     AggregationKind::DemandImpact, AggregationKind::Tabular};
  std::uint64_t seed = 1;
  int grid_bound = 1;
  std::size_t price_probes = 2;  // random price vectors per scenario for the exclusivity check

  /// Throws ConfigError for bounds that cannot produce a valid scenario.
  void validate() const;
};

InstanceBounds bounds_from_json(const std::string& text, const std::string& source = "<bounds>");
Json bounds_to_json(const InstanceBounds& bounds);

/// The index-th scenario of the seeded stream. Independent of every other
/// index, so streams can be generated in parallel.
MarketScenario generate_scenario(const InstanceBounds& bounds, std::size_t index);

std::vector<MarketScenario> enumerate_scenarios(const InstanceBounds& bounds);

struct ClaimTally {
  std::size_t pass = 0;
  std::size_t fail = 0;
  std::size_t vacuous = 0;
  std::size_t gap = 0;
  std::size_t skipped = 0;
  std::map<std::string, std::size_t> notes;

  void merge(const ClaimTally& other);
};

struct Counterexample {
  std::string claim;
  std::size_t scenario = 0;
  std::string detail;
  Json document;
};

struct VerdictReport {
  std::size_t scenarios = 0;
  std::map<std::string, ClaimTally> claims;
  std::vector<Counterexample> counterexamples;
  double wall_seconds = 0;

  std::size_t failures() const;
  void merge(const VerdictReport& other, std::size_t scenario_offset = 0);
};

Json report_to_json(const VerdictReport& report, bool with_timing = false);

/// Claim names in report order.
const std::vector<std::string>& claim_names();

/// Oracle-side facts about one profile, recomputed by enumeration.
struct ProfileFacts {
  std::vector<std::vector<Profile>> fibres;          // per agent, canonical order
  std::vector<std::optional<std::size_t>> improver;  // smallest dominator per agent
  bool arbitrage = false;
};

ProfileFacts profile_facts(const MarketScenario& scenario, const Profile& p);

/// Eductive profile: every agent is stabilized or sits in D^{k+1} with k >= 1.
bool is_eductive(const Ladders& ladders, const Profile& p);

/// Minimal k with A_{-i} strictly containing the product of the opponents'
/// UD^k, for the fibre of `map` through p; none when no order qualifies.
std::optional<std::size_t> minimal_order(const AggregationMap& map, const Ladders& ladders,
                                         std::size_t agent, const Profile& p);

// Individual checks. Each appends to `tally` and, on failure, to `cex`.
void verify_arbitrage_equivalence(const MarketScenario& sc, const Profile& p, ClaimTally& tally,
                             std::vector<std::string>& cex);
void verify_necessity(const MarketScenario& sc, const Profile& p, const std::vector<std::size_t>& declared,
                     const Ladders& ladders, ClaimTally& tally, std::vector<std::string>& cex);
void verify_sufficiency(const MarketScenario& sc, const Profile& p, const Ladders& ladders, ClaimTally& tally,
                     std::vector<std::string>& cex);
void verify_conditions(const MarketScenario& sc, const Profile& p, const Ladders& ladders, ClaimTally& first,
                     ClaimTally& second, ClaimTally& gap, std::vector<std::string>& cex_first,
                     std::vector<std::string>& cex_second);
void verify_injective(const MarketScenario& sc, const Ladders& ladders, ClaimTally& tally,
                  std::vector<std::string>& cex);
void verify_responsiveness(const AggregationMap& f1, const AggregationMap& f2, const Ladders& ladders,
                  ClaimTally& tally, std::vector<std::string>& cex);
void verify_order_jumps(const MarketScenario& sc, const TatonnementTrace& trace, const Ladders& ladders,
                  ClaimTally& tally, std::vector<std::string>& cex);

/// Every claim on one scenario. `seed` drives the declared-order sampling.
VerdictReport verify_scenario(const MarketScenario& scenario, std::uint64_t seed);

/// verify_scenario over all scenarios, parallel across scenarios, merged in
/// scenario order.
VerdictReport run_suite(const std::vector<MarketScenario>& scenarios, std::uint64_t seed);

}  // namespace hierarb
