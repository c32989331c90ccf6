#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "hierarb/aggregation.hpp"
#include "hierarb/scenario.hpp"

namespace hierarb {

/// True iff a_star beats a for `agent` against every profile in `opponents`:
/// weakly in every support state and strictly in at least one, per profile.
/// Only the opponent slots of each profile are read.
bool dominates(const MarketScenario& scenario, std::size_t agent, std::size_t a_star, std::size_t a,
               const std::vector<Profile>& opponents);

/// Candidates dominated by some strategy of the full grid. Uniform: one
/// dominator for all of `opponents`. Pointwise: a dominator per profile.
StrategySet dominated_set(const MarketScenario& scenario, std::size_t agent,
                          const std::vector<Profile>& opponents, const StrategySet& candidates,
                          DominanceMode mode, Execution exec = Execution::Parallel);

struct DominanceLadder {
  std::size_t agent = 0;
  std::vector<StrategySet> levels;     // UD^0 .. UD^K
  std::vector<StrategySet> dominated;  // D^1 .. D^K, D^K empty

  /// UD^k, with UD^k = UD^K for k > K.
  const StrategySet& level(std::size_t k) const { return levels[std::min(k, levels.size() - 1)]; }
  const StrategySet& stabilized() const { return levels.back(); }
  /// Number of rounds in which this agent lost at least one strategy.
  std::size_t eliminating_rounds() const;
};

struct Ladders {
  DominanceMode mode = DominanceMode::Uniform;
  std::size_t K = 0;  // rounds run, including the final one that removes nothing
  std::vector<DominanceLadder> agents;
};

/// Lockstep iterated elimination: round k removes from UD_i^{k-1} whatever is
/// dominated against the product of the opponents' UD^{k-1}. Stops after the
/// first round in which nobody loses a strategy.
Ladders compute_ladder(const MarketScenario& scenario, DominanceMode mode,
                       Execution exec = Execution::Parallel);

struct HierarchyOrder {
  bool infinite = false;
  std::size_t k = 0;  // meaningful when finite: the strategy lies in D^{k+1}

  bool operator==(const HierarchyOrder&) const = default;
};

std::string order_string(const HierarchyOrder& order);

HierarchyOrder classify_order(std::size_t strategy, const DominanceLadder& ladder);

/// Profiles whose opponents of `agent` range over UD_j^level for every j,
/// with slot `agent` = anchor. `level` may be -1, read as 0.
std::vector<Profile> opponent_product(const Ladders& ladders, const ProfileSpace& space,
                                      std::size_t agent, std::size_t anchor, long level);

enum class SetRelation { Equal, StrictSubset, StrictSuperset, Incomparable };

std::string relation_name(SetRelation r);

/// Relation of two sorted profile lists as sets.
SetRelation compare_sets(const std::vector<Profile>& lhs, const std::vector<Profile>& rhs);

/// Smallest strategy that dominates `anchor` against the inversion of m, or
/// none. Throws DomainError when m is not attained at `anchor`.
std::optional<std::size_t> dominated_wrtp(const MarketScenario& scenario, std::size_t agent,
                                          std::size_t anchor, const Sdf& m,
                                          Execution exec = Execution::Serial);

/// dominated_wrtp at the sdf the map produces for `profile`.
std::optional<std::size_t> dominated_wrtp_at(const MarketScenario& scenario, std::size_t agent,
                                             const Profile& profile,
                                             Execution exec = Execution::Serial);

}  // namespace hierarb
