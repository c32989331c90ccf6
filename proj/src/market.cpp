#include "hierarb/market.hpp"

#include <algorithm>

#include "hierarb/lp.hpp"

namespace hierarb {

StateSpace::StateSpace(std::vector<std::string> labels, RationalVector probabilities)
    : labels_(std::move(labels)), prob_(std::move(probabilities)) {
  if (labels_.empty()) throw DomainError("state space must contain at least one state");
  if (labels_.size() != prob_.size()) {
    throw DomainError("state space: label and probability counts differ");
  }
  Rational total = 0;
  for (std::size_t s = 0; s < prob_.size(); ++s) {
    if (prob_[s] < 0) throw DomainError("state space: negative probability for " + labels_[s]);
    total += prob_[s];
    if (prob_[s] > 0) support_.push_back(s);
  }
  if (total != 1) throw DomainError("state space: probabilities sum to " + to_string(total));
  auto sorted = labels_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw DomainError("state space: duplicate state label");
  }
}

AssetSet::AssetSet(std::vector<RationalVector> payoffs, std::size_t risk_free_index,
                   Rational gross_rate, const StateSpace& space)
    : payoffs_(std::move(payoffs)), risk_free_(risk_free_index), gross_rate_(std::move(gross_rate)) {
  if (payoffs_.empty()) throw DomainError("asset set must contain at least one asset");
  if (risk_free_ >= payoffs_.size()) throw DomainError("risk-free index out of range");
  if (gross_rate_ <= 0) throw DomainError("gross rate must be positive");
  for (const auto& row : payoffs_) {
    if (row.size() != space.size()) throw DomainError("payoff row length differs from state count");
    for (const auto& v : row) {
      if (v < 0) throw DomainError("payoffs must be non-negative");
    }
  }
  const auto& rf = payoffs_[risk_free_];
  const Rational& level = rf[space.support().front()];
  if (level <= 0) throw DomainError("risk-free payoff must be positive");
  for (auto s : space.support()) {
    if (rf[s] != level) throw DomainError("risk-free payoff must be constant on the support");
  }
}

Rational AssetSet::payout(const RationalVector& weights, std::size_t state) const {
  if (weights.size() != payoffs_.size()) throw DomainError("portfolio length differs from asset count");
  Rational acc = 0;
  for (std::size_t n = 0; n < payoffs_.size(); ++n) acc += weights[n] * payoffs_[n][state];
  return acc;
}

Sdf Sdf::create(RationalVector values, const StateSpace& space) {
  if (values.size() != space.size()) throw DomainError("sdf length differs from state count");
  Rational disc = 0;
  for (std::size_t s = 0; s < values.size(); ++s) disc += values[s] * space.probability(s);
  if (disc <= 0) throw DomainError("sdf discount factor must be positive");
  return Sdf(std::move(values));
}

RiskFreeCurve RiskFreeCurve::constant(const Rational& gross_rate) {
  if (gross_rate <= 0) throw DomainError("gross rate must be positive");
  RiskFreeCurve c;
  c.default_ = Rational(1) / gross_rate;
  return c;
}

RiskFreeCurve RiskFreeCurve::table(Rational default_discount, std::vector<Entry> entries) {
  if (default_discount <= 0) throw DomainError("risk-free discount must be positive");
  for (const auto& e : entries) {
    if (e.discount <= 0) throw DomainError("risk-free discount must be positive");
  }
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.amount < b.amount; });
  for (std::size_t k = 1; k < entries.size(); ++k) {
    if (entries[k].amount == entries[k - 1].amount) {
      throw DomainError("risk-free table has duplicate amount " + to_string(entries[k].amount));
    }
  }
  RiskFreeCurve c;
  c.default_ = std::move(default_discount);
  c.entries_ = std::move(entries);
  return c;
}

Rational RiskFreeCurve::discount(const Rational& amount) const {
  for (const auto& e : entries_) {
    if (e.amount == amount) return e.discount;
  }
  return default_;
}

PriceVector price_assets(const Sdf& m, const AssetSet& assets, const StateSpace& space) {
  PriceVector q;
  q.prices.assign(assets.count(), Rational(0));
  for (std::size_t n = 0; n < assets.count(); ++n) {
    for (auto s : space.support()) q.prices[n] += m[s] * assets.payoff(n, s) * space.probability(s);
  }
  return q;
}

Rational discount_factor(const Sdf& m, const StateSpace& space) {
  Rational acc = 0;
  for (auto s : space.support()) acc += m[s] * space.probability(s);
  return acc;
}

bool is_arbitrage_payout(const Rational& cost, const RationalVector& payouts,
                         const StateSpace& space) {
  if (cost > 0) return false;
  bool strict = false;
  for (auto s : space.support()) {
    if (payouts[s] < 0) return false;
    if (payouts[s] > 0) strict = true;
  }
  return strict;
}

bool classical_arbitrage_check(const Portfolio& theta, const PriceVector& q,
                               const AssetSet& assets, const StateSpace& space) {
  if (theta.weights.size() != assets.count() || q.prices.size() != assets.count()) {
    throw DomainError("portfolio or price length differs from asset count");
  }
  RationalVector payouts(space.size(), Rational(0));
  for (std::size_t s = 0; s < space.size(); ++s) payouts[s] = assets.payout(theta.weights, s);
  return is_arbitrage_payout(dot(theta.weights, q.prices), payouts, space);
}

bool certificate_reprices(const Sdf& m, const PriceVector& q, const AssetSet& assets,
                          const StateSpace& space) {
  for (auto s : space.support()) {
    if (m[s] <= 0) return false;
  }
  return price_assets(m, assets, space) == q;
}

namespace {

// max t  s.t.  sum_s (u_s + t) x_n(s) = q_n,  t + w = 1,  u, t, w >= 0.
std::optional<Sdf> positive_state_prices(const PriceVector& q, const AssetSet& assets,
                                         const StateSpace& space) {
  const auto& sup = space.support();
  const std::size_t k = sup.size();
  const std::size_t t_col = k;
  const std::size_t w_col = k + 1;
  std::vector<RationalVector> A;
  RationalVector b;
  for (std::size_t n = 0; n < assets.count(); ++n) {
    RationalVector row(k + 2, Rational(0));
    for (std::size_t j = 0; j < k; ++j) {
      row[j] = assets.payoff(n, sup[j]);
      row[t_col] += assets.payoff(n, sup[j]);
    }
    A.push_back(std::move(row));
    b.push_back(q.prices[n]);
  }
  RationalVector cap(k + 2, Rational(0));
  cap[t_col] = 1;
  cap[w_col] = 1;
  A.push_back(std::move(cap));
  b.push_back(1);

  RationalVector c(k + 2, Rational(0));
  c[t_col] = 1;
  const auto sol = lp::maximize(A, b, c);
  if (sol.status != lp::Status::Optimal || sol.objective <= 0) return std::nullopt;

  RationalVector m(space.size(), Rational(1));
  for (std::size_t j = 0; j < k; ++j) m[sup[j]] = (sol.x[j] + sol.x[t_col]) / space.probability(sup[j]);
  return Sdf::create(std::move(m), space);
}

// max sum_s z_s  s.t.  X'theta = z,  theta.q + sigma = 0,  z_s + v_s = 1,
// with theta = theta_plus - theta_minus and all variables non-negative.
std::optional<Portfolio> arbitrage_portfolio(const PriceVector& q, const AssetSet& assets,
                                             const StateSpace& space) {
  const auto& sup = space.support();
  const std::size_t d = assets.count();
  const std::size_t k = sup.size();
  const std::size_t z0 = 2 * d;
  const std::size_t sigma = 2 * d + k;
  const std::size_t v0 = sigma + 1;
  const std::size_t cols = v0 + k;

  std::vector<RationalVector> A;
  RationalVector b;
  for (std::size_t j = 0; j < k; ++j) {
    RationalVector row(cols, Rational(0));
    for (std::size_t n = 0; n < d; ++n) {
      row[n] = assets.payoff(n, sup[j]);
      row[d + n] = -assets.payoff(n, sup[j]);
    }
    row[z0 + j] = -1;
    A.push_back(std::move(row));
    b.push_back(0);
  }
  {
    RationalVector row(cols, Rational(0));
    for (std::size_t n = 0; n < d; ++n) {
      row[n] = q.prices[n];
      row[d + n] = -q.prices[n];
    }
    row[sigma] = 1;
    A.push_back(std::move(row));
    b.push_back(0);
  }
  for (std::size_t j = 0; j < k; ++j) {
    RationalVector row(cols, Rational(0));
    row[z0 + j] = 1;
    row[v0 + j] = 1;
    A.push_back(std::move(row));
    b.push_back(1);
  }
  RationalVector c(cols, Rational(0));
  for (std::size_t j = 0; j < k; ++j) c[z0 + j] = 1;

  const auto sol = lp::maximize(A, b, c);
  if (sol.status != lp::Status::Optimal || sol.objective <= 0) return std::nullopt;
  Portfolio theta;
  theta.weights.resize(d);
  for (std::size_t n = 0; n < d; ++n) theta.weights[n] = sol.x[n] - sol.x[d + n];
  return theta;
}

}  // namespace

ArbitrageSearchResult find_arbitrage(const PriceVector& q, const AssetSet& assets,
                                     const StateSpace& space) {
  if (q.prices.size() != assets.count()) throw DomainError("price vector length differs from asset count");
  if (auto m = positive_state_prices(q, assets, space)) return PositiveSdfCertificate{*m};
  if (auto theta = arbitrage_portfolio(q, assets, space)) return *theta;
  throw Error("find_arbitrage: neither a positive SDF nor an arbitrage was found");
}

std::vector<Portfolio> grid_arbitrages(const PriceVector& q, const AssetSet& assets,
                                       const StateSpace& space, int bound) {
  if (bound < 0) throw DomainError("grid bound must be non-negative");
  std::vector<Portfolio> found;
  const std::size_t d = assets.count();
  std::vector<int> w(d, -bound);
  for (;;) {
    Portfolio theta;
    for (int v : w) theta.weights.emplace_back(v);
    if (classical_arbitrage_check(theta, q, assets, space)) found.push_back(std::move(theta));
    std::size_t pos = 0;
    while (pos < d && w[pos] == bound) w[pos++] = -bound;
    if (pos == d) break;
    ++w[pos];
  }
  return found;
}

}  // namespace hierarb
