#include "hierarb/dominance.hpp"

#include <algorithm>

#include <omp.h>

namespace hierarb {

namespace {

// Weak in every support state and strict in one, at a single profile.
bool improves_at(const MarketScenario& sc, std::size_t agent, std::size_t a_star, std::size_t a,
                 const Profile& p) {
  const auto& g_star = sc.gain(agent, with_strategy(p, agent, a_star));
  const auto& g = sc.gain(agent, with_strategy(p, agent, a));
  bool strict = false;
  for (auto s : sc.space().support()) {
    if (g_star[s] < g[s]) return false;
    if (g_star[s] > g[s]) strict = true;
  }
  return strict;
}

bool is_dominated(const MarketScenario& sc, std::size_t agent, std::size_t a,
                  const std::vector<Profile>& opponents, DominanceMode mode) {
  const std::size_t grid = sc.agent(agent).strategies.size();
  if (mode == DominanceMode::Uniform) {
    for (std::size_t b = 0; b < grid; ++b) {
      if (b != a && dominates(sc, agent, b, a, opponents)) return true;
    }
    return false;
  }
  for (const auto& p : opponents) {
    bool beaten = false;
    for (std::size_t b = 0; b < grid && !beaten; ++b) beaten = b != a && improves_at(sc, agent, b, a, p);
    if (!beaten) return false;
  }
  return true;
}

}  // namespace

bool dominates(const MarketScenario& scenario, std::size_t agent, std::size_t a_star, std::size_t a,
               const std::vector<Profile>& opponents) {
  if (opponents.empty()) throw DomainError("dominance against an empty opponent set is undefined");
  if (a_star == a) return false;
  for (const auto& p : opponents) {
    if (!improves_at(scenario, agent, a_star, a, p)) return false;
  }
  return true;
}

StrategySet dominated_set(const MarketScenario& scenario, std::size_t agent,
                          const std::vector<Profile>& opponents, const StrategySet& candidates,
                          DominanceMode mode, Execution exec) {
  if (opponents.empty()) throw DomainError("dominance against an empty opponent set is undefined");
  StrategySet out;
  if (exec == Execution::Serial) {
    for (auto a : candidates) {
      if (is_dominated(scenario, agent, a, opponents, mode)) out.push_back(a);
    }
    return out;
  }
  std::vector<char> hit(candidates.size(), 0);
  const auto n = static_cast<std::ptrdiff_t>(candidates.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t c = 0; c < n; ++c) {
    hit[c] = is_dominated(scenario, agent, candidates[c], opponents, mode) ? 1 : 0;
  }
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    if (hit[c]) out.push_back(candidates[c]);
  }
  return out;
}

std::size_t DominanceLadder::eliminating_rounds() const {
  std::size_t n = 0;
  for (const auto& d : dominated) n += d.empty() ? 0 : 1;
  return n;
}

Ladders compute_ladder(const MarketScenario& scenario, DominanceMode mode, Execution exec) {
  const auto& space = scenario.profiles();
  const std::size_t n = scenario.agent_count();
  Ladders out;
  out.mode = mode;
  out.agents.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.agents[i].agent = i;
    StrategySet all;
    for (std::size_t a = 0; a < space.grid_size(i); ++a) all.push_back(a);
    out.agents[i].levels.push_back(std::move(all));
  }

  for (std::size_t round = 1;; ++round) {
    std::vector<StrategySet> current(n);
    for (std::size_t j = 0; j < n; ++j) current[j] = out.agents[j].levels.back();
    bool removed = false;
    std::vector<StrategySet> dom(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto opponents = space.product(i, current[i].front(), current);
      dom[i] = dominated_set(scenario, i, opponents, current[i], mode, exec);
      if (dom[i].size() == current[i].size()) {
        throw DomainError("round " + std::to_string(round) + " eliminates every remaining strategy of " +
                          scenario.agent(i).name);
      }
      removed = removed || !dom[i].empty();
    }
    for (std::size_t i = 0; i < n; ++i) {
      StrategySet next;
      std::set_difference(current[i].begin(), current[i].end(), dom[i].begin(), dom[i].end(),
                          std::back_inserter(next));
      out.agents[i].dominated.push_back(std::move(dom[i]));
      out.agents[i].levels.push_back(std::move(next));
    }
    if (!removed) {
      out.K = round;
      return out;
    }
  }
}

std::string order_string(const HierarchyOrder& order) {
  return order.infinite ? "infinite" : std::to_string(order.k);
}

HierarchyOrder classify_order(std::size_t strategy, const DominanceLadder& ladder) {
  if (std::binary_search(ladder.stabilized().begin(), ladder.stabilized().end(), strategy)) {
    return {true, 0};
  }
  for (std::size_t k = 0; k < ladder.dominated.size(); ++k) {
    const auto& d = ladder.dominated[k];
    if (std::binary_search(d.begin(), d.end(), strategy)) return {false, k};
  }
  throw DomainError("strategy " + std::to_string(strategy) + " is outside the ladder's grid");
}

std::vector<Profile> opponent_product(const Ladders& ladders, const ProfileSpace& space,
                                      std::size_t agent, std::size_t anchor, long level) {
  const std::size_t k = level < 0 ? 0 : static_cast<std::size_t>(level);
  std::vector<StrategySet> sets;
  for (const auto& l : ladders.agents) sets.push_back(l.level(k));
  return space.product(agent, anchor, sets);
}

std::string relation_name(SetRelation r) {
  switch (r) {
    case SetRelation::Equal: return "equal";
    case SetRelation::StrictSubset: return "strict_subset";
    case SetRelation::StrictSuperset: return "strict_superset";
    case SetRelation::Incomparable: return "incomparable";
  }
  return "unknown";
}

SetRelation compare_sets(const std::vector<Profile>& lhs, const std::vector<Profile>& rhs) {
  const bool sub = std::includes(rhs.begin(), rhs.end(), lhs.begin(), lhs.end());
  const bool sup = std::includes(lhs.begin(), lhs.end(), rhs.begin(), rhs.end());
  if (sub && sup) return SetRelation::Equal;
  if (sub) return SetRelation::StrictSubset;
  if (sup) return SetRelation::StrictSuperset;
  return SetRelation::Incomparable;
}

std::optional<std::size_t> dominated_wrtp(const MarketScenario& scenario, std::size_t agent,
                                          std::size_t anchor, const Sdf& m, Execution exec) {
  const OpponentSet fibre = invert(scenario.map(), m, agent, anchor, exec);
  if (fibre.empty()) {
    throw DomainError("sdf is not attained when " + scenario.agent(agent).name + " plays strategy " +
                      std::to_string(anchor));
  }
  for (std::size_t b = 0; b < scenario.agent(agent).strategies.size(); ++b) {
    if (dominates(scenario, agent, b, anchor, fibre.profiles)) return b;
  }
  return std::nullopt;
}

std::optional<std::size_t> dominated_wrtp_at(const MarketScenario& scenario, std::size_t agent,
                                             const Profile& profile, Execution exec) {
  return dominated_wrtp(scenario, agent, profile.at(agent), scenario.map().aggregate(profile), exec);
}

}  // namespace hierarb
