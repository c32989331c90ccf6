#include "hierarb/scenario.hpp"

namespace hierarb {

std::string mode_name(DominanceMode mode) {
  return mode == DominanceMode::Uniform ? "uniform" : "pointwise";
}

DominanceMode parse_mode(const std::string& text) {
  if (text == "uniform") return DominanceMode::Uniform;
  if (text == "pointwise") return DominanceMode::Pointwise;
  throw ConfigError("unknown dominance mode '" + text + "' (expected uniform or pointwise)");
}

namespace {

const std::vector<Agent>& checked_agents(const std::vector<Agent>& agents, const AssetSet& assets) {
  if (agents.empty()) throw DomainError("scenario needs at least one agent");
  for (const auto& a : agents) {
    if (a.strategies.empty()) throw DomainError("agent " + a.name + " has an empty strategy grid");
    for (const auto& s : a.strategies) {
      if (s.weights.size() != assets.count()) {
        throw DomainError("agent " + a.name + ": portfolio length differs from asset count");
      }
    }
  }
  return agents;
}

struct Pricing {
  Rational holding_cost;  // a.q
  Rational discount;      // D(-a.q)
};

Pricing price_holding(const MarketScenario& sc, const Portfolio& a, const Sdf& m) {
  const PriceVector q = price_assets(m, sc.assets(), sc.space());
  Pricing out;
  out.holding_cost = dot(a.weights, q.prices);
  out.discount = sc.risk_free().discount(-out.holding_cost);
  return out;
}

RationalVector gain_of(const MarketScenario& sc, const Portfolio& a, const Sdf& m) {
  const Pricing pr = price_holding(sc, a, m);
  const Rational funding = pr.holding_cost / pr.discount;
  RationalVector g(sc.space().size());
  for (std::size_t s = 0; s < g.size(); ++s) g[s] = sc.assets().payout(a.weights, s) - funding;
  return g;
}

}  // namespace

MarketScenario::MarketScenario(StateSpace space, AssetSet assets, std::vector<Agent> agents,
                               AggregationSpec aggregation, std::optional<RiskFreeCurve> risk_free,
                               ScenarioFlags flags)
    : space_(std::move(space)),
      assets_(std::move(assets)),
      agents_(checked_agents(agents, assets_)),
      map_(std::move(aggregation), space_, agents_),
      risk_free_(risk_free ? *risk_free : RiskFreeCurve::constant(assets_.gross_rate())),
      custom_risk_free_(risk_free.has_value()),
      flags_(std::move(flags)) {
  if (flags_.max_steps == 0) throw DomainError("max_steps must be at least 1");
  gains_.assign(agents_.size(), std::vector<RationalVector>(profiles().size()));
  for (std::size_t idx = 0; idx < profiles().size(); ++idx) {
    const Profile p = profiles().profile(idx);
    const Sdf& m = map_.aggregate_index(idx);
    for (std::size_t i = 0; i < agents_.size(); ++i) {
      gains_[i][idx] = gain_of(*this, agents_[i].strategies[p[i]], m);
    }
  }
}

MarketScenario MarketScenario::with_aggregation(AggregationSpec aggregation) const {
  return MarketScenario(space_, assets_, agents_, std::move(aggregation),
                        custom_risk_free_ ? std::optional<RiskFreeCurve>(risk_free_) : std::nullopt, flags_);
}

MarketScenario MarketScenario::with_flags(ScenarioFlags flags) const {
  return MarketScenario(space_, assets_, agents_, map_.spec(),
                        custom_risk_free_ ? std::optional<RiskFreeCurve>(risk_free_) : std::nullopt,
                        std::move(flags));
}

GainProfile net_gain(const MarketScenario& scenario, std::size_t agent, const Profile& profile) {
  if (agent >= scenario.agent_count()) throw DomainError("agent index out of range");
  const Sdf& m = scenario.map().aggregate(profile);  // throws for profiles outside the grids
  return GainProfile{gain_of(scenario, scenario.agent(agent).strategies[profile[agent]], m)};
}

Rational utility(const MarketScenario& scenario, std::size_t agent, const Profile& profile,
                 std::size_t state) {
  return net_gain(scenario, agent, profile).gain.at(state);
}

TradePlan assemble_trade_plan(const MarketScenario& scenario, std::size_t agent, std::size_t from,
                              std::size_t to, const Profile& profile) {
  const auto& strategies = scenario.agent(agent).strategies;
  if (from >= strategies.size() || to >= strategies.size()) {
    throw DomainError("trade plan: strategy outside the grid");
  }
  const Profile p_from = with_strategy(profile, agent, from);
  const Profile p_to = with_strategy(profile, agent, to);
  const auto& space = scenario.space();
  const auto& assets = scenario.assets();
  const Portfolio& a_from = strategies[from];
  const Portfolio& a_to = strategies[to];
  const Pricing pr_to = price_holding(scenario, a_to, scenario.map().aggregate(p_to));
  const Pricing pr_from = price_holding(scenario, a_from, scenario.map().aggregate(p_from));

  const std::size_t S = space.size();
  TradePlan plan;
  plan.agent = agent;
  plan.from = from;
  plan.to = to;
  plan.profile = p_from;

  TradeLeg long_leg{"long", pr_to.holding_cost, RationalVector(S)};
  TradeLeg short_leg{"short", -pr_from.holding_cost, RationalVector(S)};
  TradeLeg borrow{"borrow", -pr_to.holding_cost, RationalVector(S)};
  TradeLeg lend{"lend", pr_from.holding_cost, RationalVector(S)};
  const Rational repay = pr_to.holding_cost / pr_to.discount;
  const Rational receive = pr_from.holding_cost / pr_from.discount;
  for (std::size_t s = 0; s < S; ++s) {
    long_leg.payout[s] = assets.payout(a_to.weights, s);
    short_leg.payout[s] = -assets.payout(a_from.weights, s);
    borrow.payout[s] = -repay;
    lend.payout[s] = receive;
  }
  plan.legs = {long_leg, short_leg, borrow, lend};
  plan.payout.assign(S, Rational(0));
  for (const auto& leg : plan.legs) {
    plan.cost += leg.cost;
    for (std::size_t s = 0; s < S; ++s) plan.payout[s] += leg.payout[s];
  }
  return plan;
}

bool plan_is_arbitrage(const TradePlan& plan, const StateSpace& space) {
  return is_arbitrage_payout(plan.cost, plan.payout, space);
}

ArbitragePlan build_arbitrage_portfolio(const MarketScenario& scenario, std::size_t agent,
                                        std::size_t from, std::size_t to, const Profile& profile) {
  const auto& agent_name = scenario.agent(agent).name;
  if (profile.at(agent) != from) {
    throw DomainError("trade plan: profile " + profile_string(profile) + " does not hold strategy " +
                      std::to_string(from) + " for " + agent_name);
  }
  if (from == to) throw DomainError("trade plan: " + agent_name + " switches to the same strategy; no strict improvement");
  const auto& space = scenario.space();
  const OpponentSet fibre = invert_at(scenario.map(), agent, profile, Execution::Serial);

  ArbitragePlan out;
  for (const auto& p : fibre.profiles) {
    const auto& g_from = scenario.gain(agent, p);
    const auto& g_to = scenario.gain(agent, with_strategy(p, agent, to));
    bool strict = false;
    for (auto s : space.support()) {
      if (g_to[s] < g_from[s]) {
        throw DomainError("trade plan: " + agent_name + " strategy " + std::to_string(to) +
                          " loses to strategy " + std::to_string(from) + " against profile " +
                          profile_string(p) + " in state " + space.labels()[s]);
      }
      if (g_to[s] > g_from[s]) strict = true;
    }
    if (!strict) {
      throw DomainError("trade plan: " + agent_name + " strategy " + std::to_string(to) +
                        " gives no strict improvement against profile " + profile_string(p));
    }
    out.consistent.push_back(assemble_trade_plan(scenario, agent, from, to, p));
    if (p == profile) out.realized = out.consistent.back();
  }
  return out;
}

}  // namespace hierarb
