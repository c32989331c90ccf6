#include "hierarb/tatonnement.hpp"

#include <set>

namespace hierarb {

std::string status_name(TerminalStatus status) {
  switch (status) {
    case TerminalStatus::NoArbitrage: return "no_arbitrage";
    case TerminalStatus::MaxStepsExceeded: return "max_steps_exceeded";
    case TerminalStatus::CycleDetected: return "cycle_detected";
  }
  return "unknown";
}

std::string alpha_kind_name(AlphaKind kind) {
  switch (kind) {
    case AlphaKind::Value: return "value";
    case AlphaKind::WithinGrid: return "within_grid";
    case AlphaKind::ToInfinite: return "to_infinite";
    case AlphaKind::NotApplicable: return "not_applicable";
  }
  return "unknown";
}

TatonnementState make_state(const MarketScenario& scenario, const Profile& profile, std::size_t step) {
  TatonnementState st;
  st.step = step;
  st.profile = profile;
  st.sdf = scenario.map().aggregate(profile);
  for (std::size_t i = 0; i < scenario.agent_count(); ++i) {
    if (dominated_wrtp_at(scenario, i, profile)) st.dominated_agents.push_back(i);
  }
  return st;
}

std::optional<Revision> choose_revision(const MarketScenario& scenario, std::size_t agent,
                                        const Profile& profile) {
  const OpponentSet fibre = invert_at(scenario.map(), agent, profile, Execution::Serial);
  const std::size_t current = profile[agent];
  std::optional<std::size_t> first_dominator;
  for (std::size_t b = 0; b < scenario.agent(agent).strategies.size(); ++b) {
    if (!dominates(scenario, agent, b, current, fibre.profiles)) continue;
    if (!first_dominator) first_dominator = b;
    if (!dominated_wrtp_at(scenario, agent, with_strategy(profile, agent, b))) {
      return Revision{agent, current, b, false};
    }
  }
  if (first_dominator) return Revision{agent, current, *first_dominator, true};
  return std::nullopt;
}

std::optional<TatonnementState> step(const TatonnementState& state, const MarketScenario& scenario,
                                     RevisionPolicy policy, std::vector<Revision>* taken) {
  if (!(scenario.map().aggregate(state.profile) == state.sdf)) {
    throw DomainError("tatonnement state: sdf does not match the profile");
  }
  std::vector<Revision> revisions;
  for (std::size_t i = 0; i < scenario.agent_count(); ++i) {
    auto r = choose_revision(scenario, i, state.profile);
    if (!r) continue;
    revisions.push_back(*r);
    if (policy == RevisionPolicy::Sequential) break;
  }
  if (revisions.empty()) return std::nullopt;
  Profile next = state.profile;
  for (const auto& r : revisions) next[r.agent] = r.to;
  if (taken) *taken = revisions;
  return make_state(scenario, next, state.step + 1);
}

TatonnementTrace run(const MarketScenario& scenario, const Profile& initial, std::size_t max_steps,
                     RevisionPolicy policy) {
  if (max_steps == 0) throw DomainError("max_steps must be at least 1");
  TatonnementTrace trace;
  trace.initial = initial;
  trace.policy = policy;
  TatonnementState state = make_state(scenario, initial);
  std::set<Profile> visited{initial};
  for (;;) {
    std::vector<Revision> revisions;
    auto next = step(state, scenario, policy, &revisions);
    if (!next) {
      trace.status = TerminalStatus::NoArbitrage;
      break;
    }
    if (trace.steps.size() == max_steps) {
      trace.status = TerminalStatus::MaxStepsExceeded;
      break;
    }
    TraceStep s;
    s.before = state.profile;
    s.after = next->profile;
    s.revisions = std::move(revisions);
    s.sdf_before = state.sdf;
    s.sdf_after = next->sdf;
    trace.steps.push_back(std::move(s));
    state = std::move(*next);
    if (!visited.insert(state.profile).second) {
      trace.status = TerminalStatus::CycleDetected;
      break;
    }
  }
  trace.terminal = state.profile;
  return trace;
}

void annotate_order_jumps(TatonnementTrace& trace, const Ladders& ladders, const MarketScenario& scenario) {
  if (ladders.agents.size() != scenario.agent_count()) {
    throw DomainError("annotate: ladders were computed for a different scenario");
  }
  for (std::size_t i = 0; i < scenario.agent_count(); ++i) {
    if (ladders.agents[i].levels.front().size() != scenario.agent(i).strategies.size()) {
      throw DomainError("annotate: ladder grid differs from the scenario for " + scenario.agent(i).name);
    }
  }
  const auto& space = scenario.profiles();
  for (auto& s : trace.steps) {
    const Revision& r = s.revisions.front();
    const auto& ladder = ladders.agents[r.agent];
    s.order_before = classify_order(r.from, ladder);
    s.order_after = classify_order(r.to, ladder);
    s.annotated = true;
    s.alpha = 0;
    s.note.clear();
    if (s.order_before == s.order_after) {
      s.alpha_kind = AlphaKind::WithinGrid;
      continue;
    }
    if (s.order_before.infinite) {
      s.alpha_kind = AlphaKind::NotApplicable;
      s.note = "old strategy already stabilized";
      continue;
    }
    const long c_old = static_cast<long>(s.order_before.k);
    const auto fibre = invert_at(scenario.map(), r.agent, s.before, Execution::Serial);
    const auto product = opponent_product(ladders, space, r.agent, r.from, c_old - 1);
    const SetRelation rel = compare_sets(fibre.profiles, product);
    if (rel != SetRelation::StrictSubset) {
      s.alpha_kind = AlphaKind::NotApplicable;
      s.note = "inversion set " + relation_name(rel) + " to opponents' undominated product";
      continue;
    }
    if (s.order_after.infinite) {
      s.alpha_kind = AlphaKind::ToInfinite;
      continue;
    }
    s.alpha_kind = AlphaKind::Value;
    s.alpha = static_cast<long>(s.order_after.k) - c_old;
    if (s.alpha < 0) s.note = "negative order jump";
  }
}

}  // namespace hierarb
