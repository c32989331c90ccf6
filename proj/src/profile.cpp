#include "hierarb/profile.hpp"

namespace hierarb {

ProfileSpace::ProfileSpace(std::vector<std::size_t> grid_sizes) : sizes_(std::move(grid_sizes)) {
  if (sizes_.empty()) throw DomainError("profile space needs at least one agent");
  strides_.assign(sizes_.size(), 1);
  total_ = 1;
  for (std::size_t i = sizes_.size(); i-- > 0;) {
    if (sizes_[i] == 0) throw DomainError("every agent needs at least one strategy");
    strides_[i] = total_;
    total_ *= sizes_[i];
  }
}

bool ProfileSpace::contains(const Profile& p) const {
  if (p.size() != sizes_.size()) return false;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] >= sizes_[i]) return false;
  }
  return true;
}

std::size_t ProfileSpace::index(const Profile& p) const {
  if (!contains(p)) throw DomainError("profile " + profile_string(p) + " is outside the strategy grids");
  std::size_t idx = 0;
  for (std::size_t i = 0; i < p.size(); ++i) idx += p[i] * strides_[i];
  return idx;
}

Profile ProfileSpace::profile(std::size_t index) const {
  if (index >= total_) throw DomainError("profile index out of range");
  Profile p(sizes_.size());
  for (std::size_t i = 0; i < sizes_.size(); ++i) {
    p[i] = index / strides_[i];
    index %= strides_[i];
  }
  return p;
}

std::vector<Profile> ProfileSpace::with_fixed(std::size_t agent, std::size_t anchor) const {
  std::vector<StrategySet> sets(sizes_.size());
  for (std::size_t j = 0; j < sizes_.size(); ++j) {
    for (std::size_t a = 0; a < sizes_[j]; ++a) sets[j].push_back(a);
  }
  return product(agent, anchor, sets);
}

std::vector<Profile> ProfileSpace::product(std::size_t agent, std::size_t anchor,
                                           const std::vector<StrategySet>& sets) const {
  if (sets.size() != sizes_.size()) throw DomainError("product: one set per agent required");
  std::vector<Profile> out;
  Profile cur(sizes_.size(), 0);
  cur[agent] = anchor;
  std::vector<std::size_t> pos(sizes_.size(), 0);
  for (std::size_t j = 0; j < sizes_.size(); ++j) {
    if (j != agent && sets[j].empty()) return out;
  }
  for (;;) {
    for (std::size_t j = 0; j < sizes_.size(); ++j) {
      if (j != agent) cur[j] = sets[j][pos[j]];
    }
    out.push_back(cur);
    std::size_t j = sizes_.size();
    for (;;) {
      if (j == 0) return out;
      --j;
      if (j == agent) continue;
      if (++pos[j] < sets[j].size()) break;
      pos[j] = 0;
    }
  }
}

Profile with_strategy(Profile p, std::size_t agent, std::size_t strategy) {
  p.at(agent) = strategy;
  return p;
}

std::string profile_string(const Profile& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(p[i]);
  }
  return s + ")";
}

}  // namespace hierarb
