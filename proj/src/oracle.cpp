#include "hierarb/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <random>
#include <set>

#include <omp.h>

namespace hierarb {

// ---------------------------------------------------------------------------
// Bounds and generation

void InstanceBounds::validate() const {
  if (scenarios == 0 || max_states == 0 || max_assets == 0 || max_agents == 0 || max_grid == 0) {
    throw ConfigError("bounds: every size bound must be at least 1");
  }
  if (payoff_pool.empty() || weight_pool.empty() || sdf_pool.empty() || gross_rates.empty() || kinds.empty()) {
    throw ConfigError("bounds: value pools must not be empty");
  }
  if (std::none_of(probability_weights.begin(), probability_weights.end(), [](const Rational& w) { return w > 0; })) {
    throw ConfigError("bounds: probability weights admit no distribution summing to 1");
  }
  for (const auto& w : probability_weights) {
    if (w < 0) throw ConfigError("bounds: probability weights must be non-negative");
  }
  for (const auto& v : payoff_pool) {
    if (v < 0) throw ConfigError("bounds: payoffs must be non-negative");
  }
  if (std::none_of(sdf_pool.begin(), sdf_pool.end(), [](const Rational& v) { return v > 0; })) {
    throw ConfigError("bounds: sdf pool needs a positive value");
  }
  for (const auto& r : gross_rates) {
    if (r <= 0) throw ConfigError("bounds: gross rates must be positive");
  }
  if (grid_bound < 0) throw ConfigError("bounds: grid_bound must be non-negative");
}

namespace {

AggregationKind parse_kind(const std::string& s) {
  for (auto k : {AggregationKind::Constant, AggregationKind::Injective, AggregationKind::DemandImpact,
                 AggregationKind::Tabular}) {
    if (kind_name(k) == s) return k;
  }
  throw ConfigError("bounds: unknown aggregation kind '" + s + "'");
}

RationalVector pool_from(const Json& j, const std::string& key) {
  if (!j.is_array()) throw ConfigError("bounds: " + key + " must be an array");
  RationalVector out;
  for (const auto& v : j) {
    if (!v.is_string()) throw ConfigError("bounds: " + key + ": exact rational required, got " + v.dump());
    out.push_back(parse_rational(v.get<std::string>()));
  }
  return out;
}

}  // namespace

InstanceBounds bounds_from_json(const std::string& text, const std::string& source) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(source + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError(source + ": bounds must be an object");
  InstanceBounds b;
  auto size_field = [&](const std::string& key, std::size_t& out) {
    if (auto it = j.find(key); it != j.end()) {
      if (!it->is_number_unsigned()) throw ConfigError(source + ": " + key + " must be a non-negative integer");
      out = it->get<std::size_t>();
    }
  };
  for (const auto& [key, _] : j.items()) {
    static const std::set<std::string> allowed{
        "scenarios",   "max_states",  "max_assets", "max_agents", "max_grid",   "payoff_pool",
        "probability_weights", "weight_pool", "sdf_pool", "impact_pool", "gross_rates", "kinds",
        "seed",        "grid_bound",  "price_probes"};
    if (!allowed.count(key)) throw ConfigError(source + ": unknown field '" + key + "'");
  }
  try {
    size_field("scenarios", b.scenarios);
    size_field("max_states", b.max_states);
    size_field("max_assets", b.max_assets);
    size_field("max_agents", b.max_agents);
    size_field("max_grid", b.max_grid);
    size_field("price_probes", b.price_probes);
    if (j.contains("payoff_pool")) b.payoff_pool = pool_from(j["payoff_pool"], "payoff_pool");
    if (j.contains("probability_weights")) b.probability_weights = pool_from(j["probability_weights"], "probability_weights");
    if (j.contains("weight_pool")) b.weight_pool = pool_from(j["weight_pool"], "weight_pool");
    if (j.contains("sdf_pool")) b.sdf_pool = pool_from(j["sdf_pool"], "sdf_pool");
    if (j.contains("impact_pool")) b.impact_pool = pool_from(j["impact_pool"], "impact_pool");
    if (j.contains("gross_rates")) b.gross_rates = pool_from(j["gross_rates"], "gross_rates");
    if (j.contains("kinds")) {
      b.kinds.clear();
      for (const auto& k : j["kinds"]) {
        if (!k.is_string()) throw ConfigError("bounds: kinds must be strings");
        b.kinds.push_back(parse_kind(k.get<std::string>()));
      }
    }
    if (j.contains("seed")) {
      if (!j["seed"].is_number_unsigned()) throw ConfigError("bounds: seed must be a non-negative integer");
      b.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("grid_bound")) {
      if (!j["grid_bound"].is_number_unsigned()) throw ConfigError("bounds: grid_bound must be a non-negative integer");
      b.grid_bound = j["grid_bound"].get<int>();
    }
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    throw ConfigError(msg.rfind(source, 0) == 0 ? msg : source + ": " + msg);
  }
  b.validate();
  return b;
}

Json bounds_to_json(const InstanceBounds& b) {
  Json kinds = Json::array();
  for (auto k : b.kinds) kinds.push_back(kind_name(k));
  return Json{{"scenarios", b.scenarios},
              {"max_states", b.max_states},
              {"max_assets", b.max_assets},
              {"max_agents", b.max_agents},
              {"max_grid", b.max_grid},
              {"payoff_pool", rationals_to_json(b.payoff_pool)},
              {"probability_weights", rationals_to_json(b.probability_weights)},
              {"weight_pool", rationals_to_json(b.weight_pool)},
              {"sdf_pool", rationals_to_json(b.sdf_pool)},
              {"impact_pool", rationals_to_json(b.impact_pool)},
              {"gross_rates", rationals_to_json(b.gross_rates)},
              {"kinds", kinds},
              {"seed", b.seed},
              {"grid_bound", b.grid_bound},
              {"price_probes", b.price_probes}};
}

namespace {

using Rng = std::mt19937_64;

std::uint64_t mix(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::size_t pick(Rng& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

const Rational& draw(Rng& rng, const RationalVector& pool) { return pool[pick(rng, pool.size())]; }

RationalVector positive_draws(Rng& rng, const RationalVector& pool, std::size_t n) {
  RationalVector out;
  for (std::size_t k = 0; k < n; ++k) {
    Rational v = draw(rng, pool);
    for (int tries = 0; v <= 0 && tries < 16; ++tries) v = draw(rng, pool);
    if (v <= 0) v = 1;
    out.push_back(v);
  }
  return out;
}

}  // namespace

MarketScenario generate_scenario(const InstanceBounds& b, std::size_t index) {
  b.validate();
  Rng rng(mix(b.seed, index));
  const std::size_t S = 1 + pick(rng, b.max_states);
  const std::size_t d = 1 + pick(rng, b.max_assets);
  const std::size_t n = 1 + pick(rng, b.max_agents);

  std::vector<std::string> labels;
  for (std::size_t s = 0; s < S; ++s) labels.push_back("s" + std::to_string(s));
  RationalVector w(S);
  Rational total = 0;
  for (int tries = 0; total == 0 && tries < 64; ++tries) {
    total = 0;
    for (auto& x : w) {
      x = draw(rng, b.probability_weights);
      total += x;
    }
  }
  if (total == 0) {
    w.assign(S, Rational(0));
    w[0] = 1;
    total = 1;
  }
  for (auto& x : w) x /= total;
  StateSpace space(labels, w);

  std::vector<RationalVector> payoffs(d, RationalVector(S));
  payoffs[0].assign(S, Rational(1));
  for (std::size_t a = 1; a < d; ++a) {
    for (auto& v : payoffs[a]) v = draw(rng, b.payoff_pool);
  }
  AssetSet assets(payoffs, 0, draw(rng, b.gross_rates), space);

  std::vector<Agent> agents(n);
  for (std::size_t i = 0; i < n; ++i) {
    agents[i].name = "agent" + std::to_string(i);
    const std::size_t g = 1 + pick(rng, b.max_grid);
    std::set<RationalVector> seen;
    for (int tries = 0; agents[i].strategies.size() < g && tries < 64; ++tries) {
      RationalVector x(d);
      for (auto& v : x) v = draw(rng, b.weight_pool);
      if (seen.insert(x).second) agents[i].strategies.push_back(Portfolio{x});
    }
  }

  const AggregationKind kind = b.kinds[index % b.kinds.size()];
  std::size_t profiles = 1;
  for (const auto& a : agents) profiles *= a.strategies.size();
  AggregationSpec spec;
  spec.name = kind_name(kind) + "-" + std::to_string(index);
  switch (kind) {
    case AggregationKind::Constant:
      spec.params = AggregationSpec::Constant{positive_draws(rng, b.sdf_pool, S)};
      break;
    case AggregationKind::Injective:
      spec.params = AggregationSpec::Injective{positive_draws(rng, b.sdf_pool, S), pick(rng, S), Rational(1, 16)};
      break;
    case AggregationKind::DemandImpact: {
      const RationalVector base = positive_draws(rng, b.sdf_pool, S);
      for (int tries = 0;; ++tries) {
        std::vector<RationalVector> coef(d, RationalVector(S));
        if (tries < 8) {
          for (auto& row : coef) {
            for (auto& v : row) v = draw(rng, b.impact_pool);
          }
        } else {
          for (auto& row : coef) row.assign(S, Rational(0));
        }
        spec.params = AggregationSpec::DemandImpact{base, coef};
        try {
          AggregationMap probe(spec, space, agents);
          break;
        } catch (const DomainError&) {
        }
      }
      break;
    }
    case AggregationKind::Tabular: {
      const std::size_t pool_size = 1 + pick(rng, 3);
      std::vector<RationalVector> pool;
      for (std::size_t k = 0; k < pool_size; ++k) pool.push_back(positive_draws(rng, b.sdf_pool, S));
      std::vector<std::size_t> sizes;
      for (const auto& a : agents) sizes.push_back(a.strategies.size());
      const ProfileSpace ps(sizes);
      AggregationSpec::Tabular t;
      for (std::size_t idx = 0; idx < profiles; ++idx) t.entries.emplace_back(ps.profile(idx), pool[pick(rng, pool_size)]);
      spec.params = std::move(t);
      break;
    }
  }
  ScenarioFlags flags;
  flags.seed = mix(b.seed, index) % 1000000;
  flags.grid_bound = b.grid_bound;
  return MarketScenario(space, assets, agents, spec, std::nullopt, flags);
}

std::vector<MarketScenario> enumerate_scenarios(const InstanceBounds& bounds) {
  bounds.validate();
  std::vector<MarketScenario> out;
  out.reserve(bounds.scenarios);
  for (std::size_t k = 0; k < bounds.scenarios; ++k) out.push_back(generate_scenario(bounds, k));
  return out;
}

// ---------------------------------------------------------------------------
// Report plumbing

void ClaimTally::merge(const ClaimTally& o) {
  pass += o.pass;
  fail += o.fail;
  vacuous += o.vacuous;
  gap += o.gap;
  skipped += o.skipped;
  for (const auto& [k, v] : o.notes) notes[k] += v;
}

std::size_t VerdictReport::failures() const {
  std::size_t n = 0;
  for (const auto& [_, t] : claims) n += t.fail;
  return n;
}

namespace {
constexpr std::size_t kMaxCounterexamplesPerClaim = 3;
}

void VerdictReport::merge(const VerdictReport& other, std::size_t scenario_offset) {
  scenarios += other.scenarios;
  for (const auto& [name, t] : other.claims) claims[name].merge(t);
  for (auto c : other.counterexamples) {
    const auto same = std::count_if(counterexamples.begin(), counterexamples.end(),
                                    [&](const Counterexample& e) { return e.claim == c.claim; });
    if (static_cast<std::size_t>(same) >= kMaxCounterexamplesPerClaim) continue;
    c.scenario += scenario_offset;
    counterexamples.push_back(std::move(c));
  }
}

const std::vector<std::string>& claim_names() {
  static const std::vector<std::string> names{
      "arbitrage_equivalence",          "necessity",           "sufficiency",          "sufficient_condition",
      "necessary_condition",         "condition_gap",       "injective_map",             "responsiveness_monotone",
      "order_jump_conditions",               "order_jump_nonnegative",        "ladder_nesting",    "ladder_partition",
      "stabilization_bound", "stabilization_rounds", "inversion_roundtrip", "disjoint_fibres",
      "arbitrage_exclusivity", "kernel_agreement", "uniform_within_pointwise", "tatonnement_terminal"};
  return names;
}

Json report_to_json(const VerdictReport& report, bool with_timing) {
  Json doc;
  doc["scenarios"] = report.scenarios;
  Json claims;
  for (const auto& name : claim_names()) {
    auto it = report.claims.find(name);
    const ClaimTally t = it == report.claims.end() ? ClaimTally{} : it->second;
    Json c{{"pass", t.pass}, {"fail", t.fail}, {"vacuous", t.vacuous}, {"gap", t.gap}, {"skipped", t.skipped}};
    if (!t.notes.empty()) {
      Json notes;
      for (const auto& [k, v] : t.notes) notes[k] = v;
      c["notes"] = notes;
    }
    claims[name] = c;
  }
  doc["claims"] = claims;
  Json cex = Json::array();
  for (const auto& c : report.counterexamples) {
    cex.push_back({{"claim", c.claim}, {"scenario", c.scenario}, {"detail", c.detail}, {"document", c.document}});
  }
  doc["counterexamples"] = cex;
  doc["failures"] = report.failures();
  doc["status"] = report.failures() == 0 ? "pass" : "fail";
  if (with_timing) doc["wall_seconds"] = report.wall_seconds;
  return doc;
}

// ---------------------------------------------------------------------------
// Oracle-side recomputation

namespace {

// Gains recomputed through net_gain and facts recomputed by enumeration; the
// dominance module's ladders are only used for order classification.
class Context {
 public:
  explicit Context(const MarketScenario& sc) : sc_(sc), space_(sc.profiles()) {
    gains_.assign(sc.agent_count(), std::vector<RationalVector>(space_.size()));
    for (std::size_t idx = 0; idx < space_.size(); ++idx) {
      const Profile p = space_.profile(idx);
      for (std::size_t i = 0; i < sc.agent_count(); ++i) gains_[i][idx] = net_gain(sc, i, p).gain;
    }
    facts_.resize(space_.size());
  }

  const RationalVector& gain(std::size_t i, const Profile& p) const { return gains_[i][space_.index(p)]; }

  std::vector<Profile> fibre(std::size_t i, const Profile& p) const {
    std::vector<Profile> out;
    const Sdf& m = sc_.map().aggregate(p);
    for (std::size_t idx = 0; idx < space_.size(); ++idx) {
      const Profile q = space_.profile(idx);
      if (q[i] == p[i] && sc_.map().aggregate_index(idx) == m) out.push_back(q);
    }
    return out;
  }

  bool beats(std::size_t i, std::size_t b, const Profile& q) const {
    const auto& gb = gain(i, with_strategy(q, i, b));
    const auto& ga = gain(i, q);
    bool strict = false;
    for (auto s : sc_.space().support()) {
      if (gb[s] < ga[s]) return false;
      strict = strict || gb[s] > ga[s];
    }
    return strict;
  }

  const ProfileFacts& facts(const Profile& p) {
    auto& slot = facts_[space_.index(p)];
    if (slot) return *slot;
    ProfileFacts f;
    for (std::size_t i = 0; i < sc_.agent_count(); ++i) {
      f.fibres.push_back(fibre(i, p));
      std::optional<std::size_t> found;
      for (std::size_t b = 0; b < space_.grid_size(i) && !found; ++b) {
        if (b == p[i]) continue;
        bool all = true;
        for (const auto& q : f.fibres.back()) {
          if (!beats(i, b, q)) {
            all = false;
            break;
          }
        }
        if (all) found = b;
      }
      f.improver.push_back(found);
      f.arbitrage = f.arbitrage || found.has_value();
    }
    slot = std::move(f);
    return *slot;
  }

  const MarketScenario& scenario() const { return sc_; }
  const ProfileSpace& space() const { return space_; }

 private:
  const MarketScenario& sc_;
  const ProfileSpace& space_;
  std::vector<std::vector<RationalVector>> gains_;
  std::vector<std::optional<ProfileFacts>> facts_;
};

std::string agent_at(const MarketScenario& sc, std::size_t i, const Profile& p) {
  return sc.agent(i).name + " at " + profile_string(p);
}

bool superset_or_equal(SetRelation r) { return r == SetRelation::Equal || r == SetRelation::StrictSuperset; }
bool subset_or_equal(SetRelation r) { return r == SetRelation::Equal || r == SetRelation::StrictSubset; }

void record(ClaimTally& t, std::vector<std::string>& cex, std::string detail, const std::string& note = "") {
  ++t.fail;
  if (!note.empty()) ++t.notes[note];
  cex.push_back(std::move(detail));
}

void equivalence_with(Context& ctx, const Profile& p, ClaimTally& tally, std::vector<std::string>& cex) {
  const auto& sc = ctx.scenario();
  const auto& f = ctx.facts(p);
  bool lhs = false;
  bool rhs = false;
  for (std::size_t i = 0; i < sc.agent_count(); ++i) {
    const auto lib = dominated_wrtp_at(sc, i, p);
    lhs = lhs || lib.has_value();

    // Right-hand side: some switch whose trade plan is an arbitrage against
    // every opponent profile consistent with the observed sdf.
    std::optional<std::size_t> witness;
    for (std::size_t b = 0; b < ctx.space().grid_size(i) && !witness; ++b) {
      if (b == p[i]) continue;
      bool all = true;
      for (const auto& q : f.fibres[i]) {
        const TradePlan plan = assemble_trade_plan(sc, i, p[i], b, q);
        const auto& g_to = ctx.gain(i, with_strategy(q, i, b));
        const auto& g_from = ctx.gain(i, q);
        bool identity = plan.cost == 0;
        for (std::size_t s = 0; s < g_to.size(); ++s) identity = identity && plan.payout[s] == g_to[s] - g_from[s];
        if (!identity) {
          record(tally, cex, "trade plan for " + agent_at(sc, i, q) + " switching to " + std::to_string(b) +
                                 " does not have zero cost and gain-difference payout", "plan_identity");
          return;
        }
        if (!plan_is_arbitrage(plan, sc.space())) {
          all = false;
          break;
        }
      }
      if (all) witness = b;
    }
    rhs = rhs || witness.has_value();
    if (lib != witness || lib != f.improver[i]) {
      record(tally, cex, "dominated-wrtp witness for " + agent_at(sc, i, p) + " disagrees with the trade-plan search",
             "witness_mismatch");
      return;
    }
    if (lib) {
      try {
        const ArbitragePlan plan = build_arbitrage_portfolio(sc, i, p[i], *lib, p);
        bool ok = plan.realized.profile == p && plan.consistent.size() == f.fibres[i].size();
        for (const auto& c : plan.consistent) ok = ok && plan_is_arbitrage(c, sc.space()) && c.cost == 0;
        if (!ok) {
          record(tally, cex, "built plan for " + agent_at(sc, i, p) + " is not an arbitrage", "plan_invalid");
          return;
        }
      } catch (const DomainError& e) {
        record(tally, cex, std::string("plan refused for ") + agent_at(sc, i, p) + ": " + e.what(), "plan_refused");
        return;
      }
    }
  }
  if (lhs != rhs) {
    record(tally, cex, "equivalence broken at " + profile_string(p));
    return;
  }
  if (lhs) ++tally.pass;
  else ++tally.vacuous;
}

bool declared_valid(const Ladders& ladders, const Profile& p, const std::vector<std::size_t>& declared) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (declared[i] < 1) return false;
    const auto& level = ladders.agents[i].level(declared[i]);
    if (!std::binary_search(level.begin(), level.end(), p[i])) return false;
  }
  return true;
}

void necessity_with(Context& ctx, const Profile& p, const std::vector<std::size_t>& declared, const Ladders& ladders,
                   ClaimTally& tally, std::vector<std::string>& cex) {
  if (!declared_valid(ladders, p, declared)) {
    ++tally.skipped;
    ++tally.notes["assumption1_violated"];
    return;
  }
  const auto& f = ctx.facts(p);
  if (!f.arbitrage) {
    ++tally.vacuous;
    return;
  }
  std::string rels;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto prod = opponent_product(ladders, ctx.space(), i, p[i], static_cast<long>(declared[i]) - 1);
    const SetRelation r = compare_sets(f.fibres[i], prod);
    if (r == SetRelation::StrictSubset) {
      ++tally.pass;
      return;
    }
    rels += (i ? ", " : "") + ctx.scenario().agent(i).name + "(k=" + std::to_string(declared[i]) + "): " + relation_name(r);
  }
  bool any_incomparable = rels.find("incomparable") != std::string::npos;
  record(tally, cex, "arbitrage at " + profile_string(p) + " but no agent has a strict-subset inversion set [" + rels + "]",
         any_incomparable ? "incomparable" : "no_strict_subset");
}

void sufficiency_with(Context& ctx, const Profile& p, const Ladders& ladders, ClaimTally& tally,
                   std::vector<std::string>& cex) {
  const auto& f = ctx.facts(p);
  for (std::size_t i = 0; i < p.size(); ++i) {
    const HierarchyOrder o = classify_order(p[i], ladders.agents[i]);
    if (o.infinite) {
      ++tally.vacuous;
      continue;
    }
    const auto prod = opponent_product(ladders, ctx.space(), i, p[i], static_cast<long>(o.k));
    if (!subset_or_equal(compare_sets(f.fibres[i], prod))) {
      ++tally.vacuous;
      continue;
    }
    if (f.improver[i]) ++tally.pass;
    else record(tally, cex, agent_at(ctx.scenario(), i, p) + " in D^" + std::to_string(o.k + 1) +
                                " with inversion set inside UD^" + std::to_string(o.k) + " has no dominating switch");
  }
}

void conditions_with(Context& ctx, const Profile& p, const Ladders& ladders, ClaimTally& first, ClaimTally& second,
                   ClaimTally& gap, std::vector<std::string>& cex_first, std::vector<std::string>& cex_second) {
  if (!is_eductive(ladders, p)) {
    ++first.skipped;
    ++second.skipped;
    ++gap.skipped;
    return;
  }
  const auto& f = ctx.facts(p);
  bool cond_sufficient = true;
  bool cond_necessary = true;
  bool all_stabilized = true;
  std::string rels;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const HierarchyOrder o = classify_order(p[i], ladders.agents[i]);
    if (o.infinite) {
      rels += (i ? ", " : "") + ctx.scenario().agent(i).name + ": stabilized";
      continue;
    }
    all_stabilized = false;
    const long k = static_cast<long>(o.k);
    const SetRelation below = compare_sets(f.fibres[i], opponent_product(ladders, ctx.space(), i, p[i], k - 1));
    const SetRelation at = compare_sets(f.fibres[i], opponent_product(ladders, ctx.space(), i, p[i], k));
    cond_sufficient = cond_sufficient && superset_or_equal(below);
    cond_necessary = cond_necessary && at == SetRelation::StrictSuperset;
    rels += (i ? ", " : "") + ctx.scenario().agent(i).name + "(k=" + std::to_string(o.k) + "): " +
            relation_name(below) + " vs UD^" + std::to_string(o.k ? o.k - 1 : 0) + ", " + relation_name(at) +
            " vs UD^" + std::to_string(o.k);
  }

  if (cond_sufficient) {
    if (!f.arbitrage) ++first.pass;
    else record(first, cex_first, "sufficient condition holds at " + profile_string(p) + " yet an agent can arbitrage [" + rels + "]",
                all_stabilized ? "all_stabilized_with_arbitrage" : "superset_branch_with_arbitrage");
  } else {
    ++first.vacuous;
  }

  if (!f.arbitrage) {
    if (cond_necessary) ++second.pass;
    else record(second, cex_second, "no arbitrage at " + profile_string(p) + " but the necessary condition fails [" + rels + "]",
                rels.find("incomparable") != std::string::npos ? "incomparable" : "not_strict_superset");
  } else {
    ++second.vacuous;
  }

  if (cond_necessary && !cond_sufficient) {
    ++gap.gap;
    ++gap.notes[f.arbitrage ? "with_arbitrage" : "without_arbitrage"];
  } else {
    ++gap.vacuous;
  }
}

}  // namespace

ProfileFacts profile_facts(const MarketScenario& scenario, const Profile& p) {
  Context ctx(scenario);
  return ctx.facts(p);
}

bool is_eductive(const Ladders& ladders, const Profile& p) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    const HierarchyOrder o = classify_order(p[i], ladders.agents[i]);
    if (!o.infinite && o.k < 1) return false;
  }
  return true;
}

std::optional<std::size_t> minimal_order(const AggregationMap& map, const Ladders& ladders, std::size_t agent,
                                         const Profile& p) {
  const OpponentSet fibre = invert_at(map, agent, p, Execution::Serial);
  for (std::size_t k = 0; k <= ladders.K; ++k) {
    const auto prod = opponent_product(ladders, map.profiles(), agent, p[agent], static_cast<long>(k));
    if (compare_sets(fibre.profiles, prod) == SetRelation::StrictSuperset) return k;
  }
  return std::nullopt;
}

void verify_arbitrage_equivalence(const MarketScenario& sc, const Profile& p, ClaimTally& tally,
                             std::vector<std::string>& cex) {
  Context ctx(sc);
  equivalence_with(ctx, p, tally, cex);
}

void verify_necessity(const MarketScenario& sc, const Profile& p, const std::vector<std::size_t>& declared,
                     const Ladders& ladders, ClaimTally& tally, std::vector<std::string>& cex) {
  Context ctx(sc);
  necessity_with(ctx, p, declared, ladders, tally, cex);
}

void verify_sufficiency(const MarketScenario& sc, const Profile& p, const Ladders& ladders, ClaimTally& tally,
                     std::vector<std::string>& cex) {
  Context ctx(sc);
  sufficiency_with(ctx, p, ladders, tally, cex);
}

void verify_conditions(const MarketScenario& sc, const Profile& p, const Ladders& ladders, ClaimTally& first,
                     ClaimTally& second, ClaimTally& gap, std::vector<std::string>& cex_first,
                     std::vector<std::string>& cex_second) {
  Context ctx(sc);
  conditions_with(ctx, p, ladders, first, second, gap, cex_first, cex_second);
}

namespace {

void injective_with(Context& ctx, const Ladders& ladders, ClaimTally& tally, std::vector<std::string>& cex) {
  const auto& sc = ctx.scenario();
  if (!sc.map().is_injective()) throw DomainError("injectivity check needs a one-to-one aggregation map");
  ++tally.notes["maps_scanned"];
  for (std::size_t idx = 0; idx < ctx.space().size(); ++idx) {
    const Profile p = ctx.space().profile(idx);
    bool all_stabilized = true;
    for (std::size_t i = 0; i < p.size(); ++i) all_stabilized = all_stabilized && classify_order(p[i], ladders.agents[i]).infinite;
    const bool arb = ctx.facts(p).arbitrage;
    if (!arb == all_stabilized) {
      ++tally.pass;
    } else if (arb) {
      record(tally, cex, "every agent stabilized at " + profile_string(p) + " yet an agent can arbitrage",
             "stabilized_with_arbitrage");
    } else {
      record(tally, cex, "no arbitrage at " + profile_string(p) + " with an agent outside the stabilized set",
             "arbitrage_free_outside_stabilized");
    }
  }
}

void order_jumps_with(Context& ctx, const TatonnementTrace& raw, const Ladders& ladders, ClaimTally& tally,
                ClaimTally& alpha_tally, std::vector<std::string>& cex, std::vector<std::string>& cex_alpha) {
  const auto& sc = ctx.scenario();
  TatonnementTrace trace = raw;
  annotate_order_jumps(trace, ladders, sc);
  if (trace.steps.empty()) {
    ++tally.vacuous;
    return;
  }
  for (const auto& s : trace.steps) {
    const Revision& r = s.revisions.front();
    const std::string where = sc.agent(r.agent).name + " " + std::to_string(r.from) + "->" +
                              std::to_string(r.to) + " at " + profile_string(s.before);

    switch (s.alpha_kind) {
      case AlphaKind::Value:
        if (s.alpha >= 0) ++alpha_tally.pass;
        else record(alpha_tally, cex_alpha, "negative order jump " + std::to_string(s.alpha) + " for " + where);
        break;
      case AlphaKind::WithinGrid: ++alpha_tally.gap; break;
      case AlphaKind::ToInfinite: ++alpha_tally.pass; ++alpha_tally.notes["to_infinite"]; break;
      case AlphaKind::NotApplicable: ++alpha_tally.skipped; break;
    }

    if (r.fallback) {
      ++tally.skipped;
      ++tally.notes["new_strategy_still_dominated"];
      continue;
    }
    if (s.alpha_kind == AlphaKind::WithinGrid) {
      ++tally.gap;
      continue;
    }
    if (s.order_before.infinite) {
      record(tally, cex, "stabilized strategy revised: " + where, "old_stabilized");
      continue;
    }
    const long c_old = static_cast<long>(s.order_before.k);
    if (c_old == 0) {
      // UD^{-1} does not exist, so the initial condition has no content.
      ++tally.skipped;
      ++tally.notes["order_zero"];
      continue;
    }
    const SetRelation old_rel = compare_sets(ctx.fibre(r.agent, s.before),
                                             opponent_product(ladders, ctx.space(), r.agent, r.from, c_old - 1));
    if (old_rel != SetRelation::StrictSubset) {
      record(tally, cex, "initial condition fails (" + relation_name(old_rel) + ") for " + where,
             "initial_" + relation_name(old_rel));
      continue;
    }
    if (s.order_after.infinite) {
      ++tally.pass;
      continue;
    }
    const long c_new = static_cast<long>(s.order_after.k);
    if (c_new < c_old) {
      record(tally, cex, "order falls from " + std::to_string(c_old) + " to " + std::to_string(c_new) + " for " + where,
             "negative_alpha");
      continue;
    }
    const SetRelation new_rel = compare_sets(ctx.fibre(r.agent, s.after),
                                             opponent_product(ladders, ctx.space(), r.agent, r.to, c_new));
    if (new_rel != SetRelation::StrictSuperset) {
      record(tally, cex, "subsequent condition fails (" + relation_name(new_rel) + ") for " + where,
             "subsequent_" + relation_name(new_rel));
      continue;
    }
    ++tally.pass;
  }
}

}  // namespace

void verify_injective(const MarketScenario& sc, const Ladders& ladders, ClaimTally& tally, std::vector<std::string>& cex) {
  Context ctx(sc);
  injective_with(ctx, ladders, tally, cex);
}

void verify_responsiveness(const AggregationMap& f1, const AggregationMap& f2, const Ladders& ladders, ClaimTally& tally,
                  std::vector<std::string>& cex) {
  const Responsiveness rel = compare_responsiveness(f1, f2);
  if (rel == Responsiveness::Incomparable) {
    ++tally.skipped;
    ++tally.notes["incomparable_pair"];
    return;
  }
  const AggregationMap& coarse = rel == Responsiveness::FirstAtLeastSecond ? f2 : f1;
  const AggregationMap& fine = rel == Responsiveness::FirstAtLeastSecond ? f1 : f2;
  const auto& space = f1.profiles();
  auto rank = [](const std::optional<std::size_t>& k) { return k ? static_cast<long>(*k) : -1L; };
  for (std::size_t idx = 0; idx < space.size(); ++idx) {
    const Profile p = space.profile(idx);
    for (std::size_t i = 0; i < space.agents(); ++i) {
      const auto k_coarse = minimal_order(coarse, ladders, i, p);
      const auto k_fine = minimal_order(fine, ladders, i, p);
      // "none" means no order works, which sits above every finite order.
      const bool ok = !k_fine || (k_coarse && *k_fine >= *k_coarse);
      const bool equal_ok = rel != Responsiveness::Equal || rank(k_coarse) == rank(k_fine);
      if (!ok || !equal_ok) {
        record(tally, cex, "minimal order drops from " + (k_coarse ? std::to_string(*k_coarse) : "none") + " to " +
                               (k_fine ? std::to_string(*k_fine) : "none") + " for agent " + std::to_string(i) +
                               " at " + profile_string(p));
        return;
      }
      ++tally.notes["anchors"];
    }
  }
  ++tally.pass;
}

void verify_order_jumps(const MarketScenario& sc, const TatonnementTrace& trace, const Ladders& ladders, ClaimTally& tally,
                  std::vector<std::string>& cex) {
  Context ctx(sc);
  ClaimTally alpha;
  std::vector<std::string> ignored;
  order_jumps_with(ctx, trace, ladders, tally, alpha, cex, ignored);
}

// ---------------------------------------------------------------------------
// Structural suite

namespace {

template <class T>
bool is_subset(const std::vector<T>& a, const std::vector<T>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

void structural(Context& ctx, const Ladders& ladders, std::map<std::string, ClaimTally>& claims,
                std::map<std::string, std::vector<std::string>>& cex, std::uint64_t seed) {
  const auto& sc = ctx.scenario();
  const auto& space = ctx.space();

  // Ladder nestedness and stabilization.
  for (const auto& l : ladders.agents) {
    const std::string who = sc.agent(l.agent).name;
    bool ok = l.levels.size() == ladders.K + 1 && l.dominated.size() == ladders.K && l.levels.front().size() == space.grid_size(l.agent);
    for (std::size_t k = 1; ok && k < l.levels.size(); ++k) ok = is_subset(l.levels[k], l.levels[k - 1]);
    ok = ok && !l.dominated.empty() && l.dominated.back().empty() && !l.stabilized().empty();
    StrategySet all;
    for (const auto& d : l.dominated) all.insert(all.end(), d.begin(), d.end());
    all.insert(all.end(), l.stabilized().begin(), l.stabilized().end());
    std::sort(all.begin(), all.end());
    ok = ok && all == l.levels.front();  // pairwise disjoint and covering
    if (ok) ++claims["ladder_nesting"].pass;
    else record(claims["ladder_nesting"], cex["ladder_nesting"], "ladder of " + who + " is not nested/covering");

    bool part = true;
    for (std::size_t k = 1; k <= ladders.K && part; ++k) {
      StrategySet uni;
      std::set_union(l.dominated[k - 1].begin(), l.dominated[k - 1].end(), l.levels[k].begin(), l.levels[k].end(),
                     std::back_inserter(uni));
      StrategySet inter;
      std::set_intersection(l.dominated[k - 1].begin(), l.dominated[k - 1].end(), l.levels[k].begin(),
                            l.levels[k].end(), std::back_inserter(inter));
      part = uni == l.levels[k - 1] && inter.empty();
    }
    for (std::size_t a = 0; a < space.grid_size(l.agent) && part; ++a) {
      const HierarchyOrder o = classify_order(a, l);
      const bool in_stab = std::binary_search(l.stabilized().begin(), l.stabilized().end(), a);
      part = o.infinite ? in_stab : (!in_stab && std::binary_search(l.dominated[o.k].begin(), l.dominated[o.k].end(), a));
    }
    if (part) ++claims["ladder_partition"].pass;
    else record(claims["ladder_partition"], cex["ladder_partition"], "partition identity fails for " + who);

    if (ladders.K <= space.grid_size(l.agent)) ++claims["stabilization_bound"].pass;
    else record(claims["stabilization_bound"], cex["stabilization_bound"],
                "K=" + std::to_string(ladders.K) + " exceeds the grid size " + std::to_string(space.grid_size(l.agent)) +
                    " of " + who);

    if (l.eliminating_rounds() + 1 <= space.grid_size(l.agent)) ++claims["stabilization_rounds"].pass;
    else record(claims["stabilization_rounds"], cex["stabilization_rounds"], who + " loses strategies in too many rounds");
  }
  {
    std::size_t budget = 1;
    for (std::size_t i = 0; i < space.agents(); ++i) budget += space.grid_size(i) - 1;
    if (ladders.K <= budget) ++claims["stabilization_rounds"].pass;
    else record(claims["stabilization_rounds"], cex["stabilization_rounds"], "K exceeds 1 + total removable strategies");
  }
  // One extra round on the stabilized sets removes nothing.
  {
    std::vector<StrategySet> stab;
    for (const auto& l : ladders.agents) stab.push_back(l.stabilized());
    bool ok = true;
    for (std::size_t i = 0; i < space.agents(); ++i) {
      const auto opp = space.product(i, stab[i].front(), stab);
      ok = ok && dominated_set(sc, i, opp, stab[i], ladders.mode, Execution::Serial).empty();
    }
    if (ok) ++claims["ladder_nesting"].pass;
    else record(claims["ladder_nesting"], cex["ladder_nesting"], "stabilized sets are not stable under one more round");
  }

  // Inversion round trip and fibre partition.
  for (std::size_t i = 0; i < space.agents(); ++i) {
    for (std::size_t a = 0; a < space.grid_size(i); ++a) {
      std::set<Sdf> seen;
      std::vector<Profile> uni;
      bool disjoint = true;
      for (const auto& p : space.with_fixed(i, a)) {
        const Sdf& m = sc.map().aggregate(p);
        const OpponentSet ser = invert(sc.map(), m, i, a, Execution::Serial);
        const OpponentSet par = invert(sc.map(), m, i, a, Execution::Parallel);
        if (ser.contains(p) && ser.profiles == ctx.fibre(i, p)) ++claims["inversion_roundtrip"].pass;
        else record(claims["inversion_roundtrip"], cex["inversion_roundtrip"], "profile " + profile_string(p) + " missing from its own inversion");
        if (ser.profiles == par.profiles) ++claims["kernel_agreement"].pass;
        else record(claims["kernel_agreement"], cex["kernel_agreement"], "serial and parallel inversion differ at " + profile_string(p));
        if (seen.insert(m).second) {
          for (const auto& q : ser.profiles) {
            if (std::find(uni.begin(), uni.end(), q) != uni.end()) disjoint = false;
            uni.push_back(q);
          }
        }
      }
      std::sort(uni.begin(), uni.end());
      if (disjoint && uni == space.with_fixed(i, a)) ++claims["disjoint_fibres"].pass;
      else record(claims["disjoint_fibres"], cex["disjoint_fibres"], "fibres of agent " + std::to_string(i) + " strategy " + std::to_string(a) + " do not partition");
    }
  }

  // Serial and parallel ladders agree.
  {
    const Ladders ser = compute_ladder(sc, ladders.mode, Execution::Serial);
    bool same = ser.K == ladders.K;
    for (std::size_t i = 0; same && i < ser.agents.size(); ++i) {
      same = ser.agents[i].levels == ladders.agents[i].levels && ser.agents[i].dominated == ladders.agents[i].dominated;
    }
    if (same) ++claims["kernel_agreement"].pass;
    else record(claims["kernel_agreement"], cex["kernel_agreement"], "serial and parallel ladders differ");
  }

  // Uniform dominated sets sit inside pointwise ones.
  for (std::size_t i = 0; i < space.agents(); ++i) {
    StrategySet grid;
    for (std::size_t a = 0; a < space.grid_size(i); ++a) grid.push_back(a);
    const auto opp = space.with_fixed(i, 0);
    const auto u = dominated_set(sc, i, opp, grid, DominanceMode::Uniform, Execution::Serial);
    const auto pw = dominated_set(sc, i, opp, grid, DominanceMode::Pointwise, Execution::Serial);
    if (is_subset(u, pw)) ++claims["uniform_within_pointwise"].pass;
    else record(claims["uniform_within_pointwise"], cex["uniform_within_pointwise"], "uniform-dominated strategy not pointwise-dominated for agent " + std::to_string(i));
  }

  // find_arbitrage exclusivity, at every attained price vector plus random probes.
  std::vector<PriceVector> probes;
  {
    std::set<Sdf> seen;
    for (std::size_t idx = 0; idx < space.size(); ++idx) {
      const Sdf& m = sc.map().aggregate_index(idx);
      if (seen.insert(m).second) probes.push_back(price_assets(m, sc.assets(), sc.space()));
    }
    Rng rng(mix(seed, 7));
    const RationalVector pool{Rational(-1), Rational(0), Rational(1, 2), Rational(1), Rational(2)};
    for (std::size_t k = 0; k < 2; ++k) {
      PriceVector q;
      for (std::size_t n = 0; n < sc.assets().count(); ++n) q.prices.push_back(draw(rng, pool));
      probes.push_back(q);
    }
  }
  for (const auto& q : probes) {
    const auto found = find_arbitrage(q, sc.assets(), sc.space());
    const auto grid = grid_arbitrages(q, sc.assets(), sc.space(), sc.flags().grid_bound);
    auto& t = claims["arbitrage_exclusivity"];
    if (const auto* cert = std::get_if<PositiveSdfCertificate>(&found)) {
      if (certificate_reprices(cert->sdf, q, sc.assets(), sc.space()) && grid.empty()) {
        ++t.pass;
        ++t.notes["certificate"];
      } else {
        record(t, cex["arbitrage_exclusivity"], "certificate branch with a grid arbitrage or a bad certificate");
      }
    } else {
      const auto& theta = std::get<Portfolio>(found);
      if (classical_arbitrage_check(theta, q, sc.assets(), sc.space())) {
        ++t.pass;
        ++t.notes[grid.empty() ? "portfolio_off_grid" : "portfolio_grid_confirmed"];
      } else {
        record(t, cex["arbitrage_exclusivity"], "portfolio branch returned a non-arbitrage");
      }
    }
  }
}

std::vector<std::size_t> maximal_declaration(const Ladders& ladders, const Profile& p) {
  std::vector<std::size_t> k(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const HierarchyOrder o = classify_order(p[i], ladders.agents[i]);
    k[i] = o.infinite ? ladders.K : o.k;
  }
  return k;
}

AggregationSpec constant_variant(const MarketScenario& sc) {
  return AggregationSpec{"constant", AggregationSpec::Constant{sc.map().aggregate_index(0).values()}};
}

AggregationSpec injective_variant(const MarketScenario& sc) {
  return AggregationSpec{"injective", AggregationSpec::Injective{sc.map().aggregate_index(0).values(), 0, Rational(1, 16)}};
}

// Pools the map's distinct outputs into at most two groups, which can only
// coarsen its fibres.
AggregationSpec coarsened_variant(const MarketScenario& sc, Rng& rng) {
  const auto& space = sc.profiles();
  std::vector<Sdf> distinct;
  for (std::size_t idx = 0; idx < space.size(); ++idx) {
    const Sdf& m = sc.map().aggregate_index(idx);
    if (std::find(distinct.begin(), distinct.end(), m) == distinct.end()) distinct.push_back(m);
  }
  std::vector<std::size_t> group(distinct.size());
  for (auto& g : group) g = pick(rng, 2);
  AggregationSpec::Tabular t;
  for (std::size_t idx = 0; idx < space.size(); ++idx) {
    const Sdf& m = sc.map().aggregate_index(idx);
    const auto pos = static_cast<std::size_t>(std::find(distinct.begin(), distinct.end(), m) - distinct.begin());
    const std::size_t rep = static_cast<std::size_t>(
        std::find(group.begin(), group.end(), group[pos]) - group.begin());
    t.entries.emplace_back(space.profile(idx), distinct[rep].values());
  }
  return AggregationSpec{"coarsened", std::move(t)};
}

}  // namespace

VerdictReport verify_scenario(const MarketScenario& sc, std::uint64_t seed) {
  VerdictReport report;
  report.scenarios = 1;
  for (const auto& name : claim_names()) report.claims[name];
  std::map<std::string, std::vector<std::string>> cex;
  Context ctx(sc);
  const auto& space = ctx.space();
  const Ladders ladders = compute_ladder(sc, sc.flags().mode, Execution::Parallel);
  Rng rng(mix(seed, 3));

  structural(ctx, ladders, report.claims, cex, seed);

  for (std::size_t idx = 0; idx < space.size(); ++idx) {
    const Profile p = space.profile(idx);
    equivalence_with(ctx, p, report.claims["arbitrage_equivalence"], cex["arbitrage_equivalence"]);
    sufficiency_with(ctx, p, ladders, report.claims["sufficiency"], cex["sufficiency"]);
    conditions_with(ctx, p, ladders, report.claims["sufficient_condition"], report.claims["necessary_condition"],
                  report.claims["condition_gap"], cex["sufficient_condition"], cex["necessary_condition"]);
    if (is_eductive(ladders, p)) {
      const auto top = maximal_declaration(ladders, p);
      necessity_with(ctx, p, top, ladders, report.claims["necessity"], cex["necessity"]);
      std::vector<std::size_t> drawn(p.size());
      for (std::size_t i = 0; i < p.size(); ++i) drawn[i] = 1 + pick(rng, top[i]);
      if (drawn != top) necessity_with(ctx, p, drawn, ladders, report.claims["necessity"], cex["necessity"]);
    } else {
      ++report.claims["necessity"].skipped;
      ++report.claims["necessity"].notes["order_zero_agent"];
    }

    const TatonnementTrace trace = run(sc, p, sc.flags().max_steps);
    auto& term = report.claims["tatonnement_terminal"];
    bool chained = true;
    Profile at = trace.initial;
    for (const auto& s : trace.steps) {
      chained = chained && s.before == at && s.sdf_before == sc.map().aggregate(s.before) &&
                s.sdf_after == sc.map().aggregate(s.after);
      at = s.after;
    }
    chained = chained && at == trace.terminal;
    ++term.notes[status_name(trace.status)];
    if (!chained) {
      record(term, cex["tatonnement_terminal"], "trace from " + profile_string(p) + " does not chain");
    } else if (trace.status == TerminalStatus::NoArbitrage && ctx.facts(trace.terminal).arbitrage) {
      record(term, cex["tatonnement_terminal"], "terminal profile " + profile_string(trace.terminal) + " still has arbitrage");
    } else {
      ++term.pass;
    }
    order_jumps_with(ctx, trace, ladders, report.claims["order_jump_conditions"], report.claims["order_jump_nonnegative"], cex["order_jump_conditions"], cex["order_jump_nonnegative"]);
  }

  if (sc.map().is_injective()) injective_with(ctx, ladders, report.claims["injective_map"], cex["injective_map"]);
  else ++report.claims["injective_map"].skipped;

  {
    const AggregationMap own = sc.map();
    const AggregationMap constant(constant_variant(sc), sc.space(), sc.agents());
    const AggregationMap injective(injective_variant(sc), sc.space(), sc.agents());
    const AggregationMap coarse(coarsened_variant(sc, rng), sc.space(), sc.agents());
    const std::vector<std::pair<const AggregationMap*, const AggregationMap*>> pairs{
        {&constant, &own}, {&coarse, &own}, {&own, &injective}, {&constant, &injective}, {&coarse, &injective}};
    for (const auto& [lo, hi] : pairs) verify_responsiveness(*lo, *hi, ladders, report.claims["responsiveness_monotone"], cex["responsiveness_monotone"]);
  }

  const Json doc = scenario_to_json(sc);
  for (const auto& name : claim_names()) {
    const auto& list = cex[name];
    for (std::size_t k = 0; k < list.size() && k < kMaxCounterexamplesPerClaim; ++k) {
      report.counterexamples.push_back(Counterexample{name, 0, list[k], doc});
    }
  }
  return report;
}

VerdictReport run_suite(const std::vector<MarketScenario>& scenarios, std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<VerdictReport> parts(scenarios.size());
  const auto n = static_cast<std::ptrdiff_t>(scenarios.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    parts[k] = verify_scenario(scenarios[k], mix(seed, static_cast<std::uint64_t>(k)));
  }
  VerdictReport out;
  for (const auto& name : claim_names()) out.claims[name];
  for (std::size_t k = 0; k < parts.size(); ++k) out.merge(parts[k], k);
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace hierarb
