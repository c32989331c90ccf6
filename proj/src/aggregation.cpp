#include "hierarb/aggregation.hpp"

#include <algorithm>
#include <numeric>

#include <omp.h>

namespace hierarb {

std::string kind_name(AggregationKind kind) {
  switch (kind) {
    case AggregationKind::Constant: return "constant";
    case AggregationKind::Injective: return "injective";
    case AggregationKind::DemandImpact: return "demand_impact";
    case AggregationKind::Tabular: return "tabular";
  }
  return "unknown";
}

namespace {

std::vector<std::size_t> grid_sizes(const std::vector<Agent>& agents) {
  std::vector<std::size_t> sizes;
  for (const auto& a : agents) sizes.push_back(a.strategies.size());
  return sizes;
}

void check_length(const RationalVector& v, const StateSpace& space, const char* what) {
  if (v.size() != space.size()) {
    throw DomainError(std::string(what) + ": expected " + std::to_string(space.size()) +
                      " state values, got " + std::to_string(v.size()));
  }
}

std::vector<Sdf> build_table(const AggregationSpec& spec, const StateSpace& space,
                             const std::vector<Agent>& agents, const ProfileSpace& profiles) {
  std::vector<Sdf> table;
  table.reserve(profiles.size());

  if (const auto* c = std::get_if<AggregationSpec::Constant>(&spec.params)) {
    check_length(c->sdf, space, "constant map");
    const Sdf m = Sdf::create(c->sdf, space);
    table.assign(profiles.size(), m);
  } else if (const auto* inj = std::get_if<AggregationSpec::Injective>(&spec.params)) {
    check_length(inj->base, space, "injective map");
    if (inj->state >= space.size()) throw DomainError("injective map: perturbed state out of range");
    if (inj->step == 0 && profiles.size() > 1) throw DomainError("injective map: step must be nonzero");
    for (std::size_t idx = 0; idx < profiles.size(); ++idx) {
      RationalVector v = inj->base;
      v[inj->state] += Rational(static_cast<long>(idx)) * inj->step;
      try {
        table.push_back(Sdf::create(std::move(v), space));
      } catch (const DomainError&) {
        throw DomainError("injective map: non-positive discount at " +
                          profile_string(profiles.profile(idx)));
      }
    }
  } else if (const auto* dem = std::get_if<AggregationSpec::DemandImpact>(&spec.params)) {
    check_length(dem->base, space, "demand impact map");
    const std::size_t d = agents.empty() || agents.front().strategies.empty()
                              ? 0
                              : agents.front().strategies.front().weights.size();
    if (dem->coefficients.size() != d) {
      throw DomainError("demand impact map: one coefficient row per asset required");
    }
    for (const auto& row : dem->coefficients) check_length(row, space, "demand impact coefficients");
    for (std::size_t idx = 0; idx < profiles.size(); ++idx) {
      const Profile p = profiles.profile(idx);
      RationalVector demand(d, Rational(0));
      for (std::size_t j = 0; j < p.size(); ++j) {
        const auto& w = agents[j].strategies[p[j]].weights;
        for (std::size_t n = 0; n < d; ++n) demand[n] += w[n];
      }
      RationalVector v(space.size());
      for (std::size_t s = 0; s < space.size(); ++s) {
        Rational factor = 1;
        for (std::size_t n = 0; n < d; ++n) factor += dem->coefficients[n][s] * demand[n];
        if (factor <= 0) {
          throw DomainError("demand impact map: impact factor " + to_string(factor) + " in state " +
                            space.labels()[s] + " at " + profile_string(p) + " is not positive");
        }
        v[s] = dem->base[s] * factor;
      }
      try {
        table.push_back(Sdf::create(std::move(v), space));
      } catch (const DomainError&) {
        throw DomainError("demand impact map: non-positive discount at " + profile_string(p));
      }
    }
  } else {
    const auto& tab = std::get<AggregationSpec::Tabular>(spec.params);
    std::vector<std::optional<Sdf>> slots(profiles.size());
    for (const auto& [p, v] : tab.entries) {
      if (!profiles.contains(p)) throw DomainError("tabular map: entry " + profile_string(p) + " is outside the grids");
      check_length(v, space, "tabular map");
      auto& slot = slots[profiles.index(p)];
      if (slot) throw DomainError("tabular map: duplicate entry for " + profile_string(p));
      try {
        slot = Sdf::create(v, space);
      } catch (const DomainError&) {
        throw DomainError("tabular map: non-positive discount at " + profile_string(p));
      }
    }
    for (std::size_t idx = 0; idx < slots.size(); ++idx) {
      if (!slots[idx]) {
        throw DomainError("tabular map: no entry for profile " + profile_string(profiles.profile(idx)));
      }
      table.push_back(*slots[idx]);
    }
  }
  return table;
}

}  // namespace

AggregationMap::AggregationMap(AggregationSpec spec, const StateSpace& space,
                               const std::vector<Agent>& agents)
    : spec_(std::move(spec)), profiles_(grid_sizes(agents)) {
  table_ = build_table(spec_, space, agents, profiles_);

  std::vector<std::size_t> order(table_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return table_[a] < table_[b]; });
  injective_ = true;
  for (std::size_t k = 1; k < order.size(); ++k) {
    if (table_[order[k]] == table_[order[k - 1]]) {
      injective_ = false;
      break;
    }
  }
  if (kind() == AggregationKind::Injective && !injective_) {
    throw DomainError("injective map: two profiles share an sdf");
  }
}

bool OpponentSet::contains(const Profile& p) const {
  return std::binary_search(profiles.begin(), profiles.end(), p);
}

OpponentSet invert(const AggregationMap& f, const Sdf& m, std::size_t agent, std::size_t anchor,
                   Execution exec) {
  const auto& space = f.profiles();
  if (agent >= space.agents()) throw DomainError("invert: agent index out of range");
  if (anchor >= space.grid_size(agent)) throw DomainError("invert: strategy outside the grid");

  OpponentSet out{agent, anchor, {}};
  const std::size_t total = space.size();
  if (exec == Execution::Serial) {
    for (const auto& p : space.with_fixed(agent, anchor)) {
      if (f.aggregate(p) == m) out.profiles.push_back(p);
    }
    return out;
  }

  std::vector<char> hit(total, 0);
  const auto n = static_cast<std::ptrdiff_t>(total);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t idx = 0; idx < n; ++idx) {
    const Profile p = space.profile(static_cast<std::size_t>(idx));
    if (p[agent] == anchor && f.aggregate_index(static_cast<std::size_t>(idx)) == m) hit[idx] = 1;
  }
  for (std::size_t idx = 0; idx < total; ++idx) {
    if (hit[idx]) out.profiles.push_back(space.profile(idx));
  }
  return out;
}

OpponentSet invert_at(const AggregationMap& f, std::size_t agent, const Profile& profile,
                      Execution exec) {
  return invert(f, f.aggregate(profile), agent, profile.at(agent), exec);
}

std::string responsiveness_name(Responsiveness r) {
  switch (r) {
    case Responsiveness::SecondAtLeastFirst: return "f2_at_least_f1";
    case Responsiveness::FirstAtLeastSecond: return "f1_at_least_f2";
    case Responsiveness::Equal: return "equal";
    case Responsiveness::Incomparable: return "incomparable";
  }
  return "unknown";
}

Responsiveness compare_responsiveness(const AggregationMap& f1, const AggregationMap& f2) {
  const auto& space = f1.profiles();
  if (space.grid_sizes() != f2.profiles().grid_sizes()) {
    throw DomainError("compare_responsiveness: maps are defined on different profile spaces");
  }
  // Fibres through p and q coincide for agent i iff p and q share a_i and the
  // map sends both to the same sdf. f2's fibre through p is inside f1's for
  // every p iff pooling under f2 implies pooling under f1.
  bool f2_finer = true;
  bool f1_finer = true;
  const std::size_t total = space.size();
  for (std::size_t a = 0; a < total && (f2_finer || f1_finer); ++a) {
    const Profile p = space.profile(a);
    for (std::size_t b = a + 1; b < total; ++b) {
      const Profile q = space.profile(b);
      bool shares_slot = false;
      for (std::size_t i = 0; i < p.size(); ++i) shares_slot = shares_slot || p[i] == q[i];
      if (!shares_slot) continue;
      const bool pooled1 = f1.aggregate_index(a) == f1.aggregate_index(b);
      const bool pooled2 = f2.aggregate_index(a) == f2.aggregate_index(b);
      if (pooled2 && !pooled1) f2_finer = false;
      if (pooled1 && !pooled2) f1_finer = false;
    }
  }
  if (f2_finer && f1_finer) return Responsiveness::Equal;
  if (f2_finer) return Responsiveness::SecondAtLeastFirst;
  if (f1_finer) return Responsiveness::FirstAtLeastSecond;
  return Responsiveness::Incomparable;
}

}  // namespace hierarb
