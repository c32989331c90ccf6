#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hierarb/rational.hpp"

namespace hierarb {

/// Finite state space with an exact physical measure.
class StateSpace {
 public:
  StateSpace(std::vector<std::string> labels, RationalVector probabilities);

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const RationalVector& probabilities() const { return prob_; }
  const Rational& probability(std::size_t s) const { return prob_[s]; }

  /// States with strictly positive probability, ascending.
  const std::vector<std::size_t>& support() const { return support_; }
  bool in_support(std::size_t s) const { return prob_[s] > 0; }

 private:
  std::vector<std::string> labels_;
  RationalVector prob_;
  std::vector<std::size_t> support_;
};

/// Payoff matrix (asset x state) with a designated risk-free asset.
class AssetSet {
 public:
  AssetSet(std::vector<RationalVector> payoffs, std::size_t risk_free_index, Rational gross_rate,
           const StateSpace& space);

  std::size_t count() const { return payoffs_.size(); }
  const std::vector<RationalVector>& payoffs() const { return payoffs_; }
  const Rational& payoff(std::size_t asset, std::size_t state) const {
    return payoffs_[asset][state];
  }
  std::size_t risk_free_index() const { return risk_free_; }
  const Rational& gross_rate() const { return gross_rate_; }

  /// Payout of `weights` in state s.
  Rational payout(const RationalVector& weights, std::size_t state) const;

 private:
  std::vector<RationalVector> payoffs_;
  std::size_t risk_free_;
  Rational gross_rate_;
};

struct Portfolio {
  RationalVector weights;

  bool operator==(const Portfolio&) const = default;
  auto operator<=>(const Portfolio&) const = default;
};

/// Stochastic discount factor; the discount factor sum m(s)P(s) is positive.
class Sdf {
 public:
  Sdf() = default;  // empty placeholder; only create() yields a valid sdf
  static Sdf create(RationalVector values, const StateSpace& space);

  const RationalVector& values() const { return values_; }
  const Rational& operator[](std::size_t s) const { return values_[s]; }
  std::size_t size() const { return values_.size(); }

  bool operator==(const Sdf&) const = default;
  auto operator<=>(const Sdf& other) const { return values_ <=> other.values_; }

 private:
  explicit Sdf(RationalVector values) : values_(std::move(values)) {}
  RationalVector values_;
};

struct PriceVector {
  RationalVector prices;
  bool operator==(const PriceVector&) const = default;
};

struct GainProfile {
  RationalVector gain;  // indexed by state
  bool operator==(const GainProfile&) const = default;
};

/// Risk-free funding curve: maps a funding amount w to the discount factor of
/// the risk-free SDF it induces. Default is the amount-independent 1/R.
class RiskFreeCurve {
 public:
  struct Entry {
    Rational amount;
    Rational discount;
  };

  static RiskFreeCurve constant(const Rational& gross_rate);
  static RiskFreeCurve table(Rational default_discount, std::vector<Entry> entries);

  Rational discount(const Rational& amount) const;
  bool is_constant() const { return entries_.empty(); }
  const Rational& default_discount() const { return default_; }
  const std::vector<Entry>& entries() const { return entries_; }

 private:
  Rational default_;
  std::vector<Entry> entries_;
};

PriceVector price_assets(const Sdf& m, const AssetSet& assets, const StateSpace& space);

Rational discount_factor(const Sdf& m, const StateSpace& space);

/// Arbitrage test over a realized cost and state payouts: cost <= 0,
/// payout >= 0 on the support, > 0 somewhere on the support.
bool is_arbitrage_payout(const Rational& cost, const RationalVector& payouts,
                         const StateSpace& space);

bool classical_arbitrage_check(const Portfolio& theta, const PriceVector& q,
                               const AssetSet& assets, const StateSpace& space);

/// Strictly positive SDF (on the support) that reprices q exactly.
struct PositiveSdfCertificate {
  Sdf sdf;
};

using ArbitrageSearchResult = std::variant<Portfolio, PositiveSdfCertificate>;

/// Either an arbitrage portfolio or a strictly positive repricing SDF, found by
/// exact linear programming. Exactly one exists.
ArbitrageSearchResult find_arbitrage(const PriceVector& q, const AssetSet& assets,
                                     const StateSpace& space);

/// Certificate check used by tests and the oracle: m > 0 on the support and
/// price_assets(m) == q.
bool certificate_reprices(const Sdf& m, const PriceVector& q, const AssetSet& assets,
                          const StateSpace& space);

/// All integer portfolios with entries in [-bound, bound] that are arbitrages.
/// Used to cross-check find_arbitrage at desk scale.
std::vector<Portfolio> grid_arbitrages(const PriceVector& q, const AssetSet& assets,
                                       const StateSpace& space, int bound);

}  // namespace hierarb
