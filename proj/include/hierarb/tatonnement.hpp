#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "hierarb/dominance.hpp"
#include "hierarb/scenario.hpp"

namespace hierarb {

enum class RevisionPolicy { Sequential, Simultaneous };

enum class TerminalStatus { NoArbitrage, MaxStepsExceeded, CycleDetected };

std::string status_name(TerminalStatus status);

struct TatonnementState {
  std::size_t step = 0;
  Profile profile;
  Sdf sdf;
  std::vector<std::size_t> dominated_agents;
};

TatonnementState make_state(const MarketScenario& scenario, const Profile& profile, std::size_t step = 0);

struct Revision {
  std::size_t agent = 0;
  std::size_t from = 0;
  std::size_t to = 0;
  bool fallback = false;  // no dominator was itself undominated after the switch
};

enum class AlphaKind { Value, WithinGrid, ToInfinite, NotApplicable };

std::string alpha_kind_name(AlphaKind kind);

struct TraceStep {
  Profile before;
  Profile after;
  std::vector<Revision> revisions;  // one entry unless the policy is simultaneous
  Sdf sdf_before;
  Sdf sdf_after;

  // Filled by annotate_order_jumps, for revisions.front().
  HierarchyOrder order_before;
  HierarchyOrder order_after;
  AlphaKind alpha_kind = AlphaKind::NotApplicable;
  long alpha = 0;
  std::string note;
  bool annotated = false;
};

struct TatonnementTrace {
  Profile initial;
  std::vector<TraceStep> steps;
  TerminalStatus status = TerminalStatus::NoArbitrage;
  Profile terminal;
  RevisionPolicy policy = RevisionPolicy::Sequential;
};

/// Revision chosen for `agent` at `profile`: the smallest strategy that
/// dominates the current one against the inversion set and is undominated at
/// the sdf its own switch produces, else the smallest dominator. None when the
/// agent is not dominated.
std::optional<Revision> choose_revision(const MarketScenario& scenario, std::size_t agent,
                                        const Profile& profile);

/// One adjustment: the lowest-indexed dominated agent revises (all of them
/// under the simultaneous policy). nullopt means the process has concluded.
std::optional<TatonnementState> step(const TatonnementState& state, const MarketScenario& scenario,
                                     RevisionPolicy policy = RevisionPolicy::Sequential,
                                     std::vector<Revision>* taken = nullptr);

TatonnementTrace run(const MarketScenario& scenario, const Profile& initial, std::size_t max_steps,
                     RevisionPolicy policy = RevisionPolicy::Sequential);

/// Hierarchy orders before/after each step and the order jump alpha. A jump is
/// reported as a value only when both orders are finite and the old inversion
/// set is strictly inside the product of the opponents' UD^{k-1}.
void annotate_order_jumps(TatonnementTrace& trace, const Ladders& ladders, const MarketScenario& scenario);

}  // namespace hierarb
