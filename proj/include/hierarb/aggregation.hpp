#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hierarb/market.hpp"
#include "hierarb/profile.hpp"

namespace hierarb {

enum class AggregationKind { Constant, Injective, DemandImpact, Tabular };

std::string kind_name(AggregationKind kind);

/// Declarative description of an aggregation mapping, as it appears in a
/// scenario document. Binding it to a market yields an AggregationMap.
struct AggregationSpec {
  struct Constant {
    RationalVector sdf;
  };
  /// base + (profile index) * step in the designated state.
  struct Injective {
    RationalVector base;
    std::size_t state = 0;
    Rational step;
  };
  /// m(s) = base(s) * (1 + sum_n coefficients[n][s] * demand_n), where
  /// demand_n is the aggregate holding of asset n across all agents.
  struct DemandImpact {
    RationalVector base;
    std::vector<RationalVector> coefficients;
  };
  struct Tabular {
    std::vector<std::pair<Profile, RationalVector>> entries;
  };

  std::string name;
  std::variant<Constant, Injective, DemandImpact, Tabular> params;

  AggregationKind kind() const { return static_cast<AggregationKind>(params.index()); }
};

/// Profile -> SDF mapping bound to a concrete market. Every output is computed
/// and validated at construction, so aggregate() never fails for an in-grid
/// profile.
class AggregationMap {
 public:
  AggregationMap(AggregationSpec spec, const StateSpace& space, const std::vector<Agent>& agents);

  const AggregationSpec& spec() const { return spec_; }
  AggregationKind kind() const { return spec_.kind(); }
  const ProfileSpace& profiles() const { return profiles_; }

  const Sdf& aggregate(const Profile& profile) const { return table_[profiles_.index(profile)]; }
  const Sdf& aggregate_index(std::size_t profile_index) const { return table_[profile_index]; }

  /// True iff distinct profiles always map to distinct SDFs.
  bool is_injective() const { return injective_; }

 private:
  AggregationSpec spec_;
  ProfileSpace profiles_;
  std::vector<Sdf> table_;
  bool injective_ = false;
};

/// A_{-i}(m, a_i): opponent profiles consistent with observing m after
/// playing a_i. Profiles are stored in full with slot `agent` = anchor.
struct OpponentSet {
  std::size_t agent = 0;
  std::size_t anchor = 0;
  std::vector<Profile> profiles;

  bool empty() const { return profiles.empty(); }
  bool contains(const Profile& p) const;
};

enum class Execution { Serial, Parallel };

OpponentSet invert(const AggregationMap& f, const Sdf& m, std::size_t agent, std::size_t anchor,
                   Execution exec = Execution::Parallel);

/// Inversion of the SDF actually produced at `profile`.
OpponentSet invert_at(const AggregationMap& f, std::size_t agent, const Profile& profile,
                      Execution exec = Execution::Parallel);

enum class Responsiveness { SecondAtLeastFirst, FirstAtLeastSecond, Equal, Incomparable };

std::string responsiveness_name(Responsiveness r);

/// Partial order by inclusion of inversion fibres: f2 is at least as
/// responsive as f1 when, for every agent and every profile p, the fibre of
/// f2 through p is contained in the fibre of f1 through p.
Responsiveness compare_responsiveness(const AggregationMap& f1, const AggregationMap& f2);

}  // namespace hierarb
