#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hierarb/market.hpp"

namespace hierarb {

/// Strategy index per agent, in canonical grid order.
using Profile = std::vector<std::size_t>;

/// Sorted, duplicate-free strategy indices of one agent.
using StrategySet = std::vector<std::size_t>;

struct Agent {
  std::string name;
  std::vector<Portfolio> strategies;
};

/// Mixed-radix enumeration of all strategy profiles. Agent 0 is the most
/// significant digit, so index order is lexicographic profile order.
class ProfileSpace {
 public:
  ProfileSpace() = default;
  explicit ProfileSpace(std::vector<std::size_t> grid_sizes);

  std::size_t agents() const { return sizes_.size(); }
  std::size_t size() const { return total_; }
  std::size_t grid_size(std::size_t agent) const { return sizes_[agent]; }
  const std::vector<std::size_t>& grid_sizes() const { return sizes_; }

  bool contains(const Profile& p) const;
  std::size_t index(const Profile& p) const;
  Profile profile(std::size_t index) const;

  /// Every profile with `agent` fixed to `anchor`, in canonical order.
  std::vector<Profile> with_fixed(std::size_t agent, std::size_t anchor) const;

  /// Profiles whose opponents of `agent` range over `sets` (sets[agent] is
  /// ignored; the slot holds `anchor`). Canonical order.
  std::vector<Profile> product(std::size_t agent, std::size_t anchor,
                               const std::vector<StrategySet>& sets) const;

 private:
  std::vector<std::size_t> sizes_;
  std::vector<std::size_t> strides_;
  std::size_t total_ = 0;
};

Profile with_strategy(Profile p, std::size_t agent, std::size_t strategy);

std::string profile_string(const Profile& p);

}  // namespace hierarb
