#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <omp.h>

#include "hierarb/document.hpp"
#include "hierarb/oracle.hpp"

using namespace hierarb;

namespace {

enum Exit { kOk = 0, kInput = 2, kCycle = 3, kStepCap = 4, kVerifyFailed = 5 };

struct Options {
  std::string scenario;
  std::string profile;
  std::string mode;
  std::string out;
  std::string sdf;
  std::string bounds;
  std::string replay_dir = "replay";
  std::vector<std::string> extra;
  std::vector<std::string> variants;
  std::optional<std::size_t> max_steps;
  std::optional<std::uint64_t> seed;
  bool simultaneous = false;
  bool timing = false;
};

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) std::cout << text;
  else write_text(o.out, text);
}

MarketScenario load(const Options& o) {
  MarketScenario sc = load_scenario(o.scenario);
  ScenarioFlags flags = sc.flags();
  if (!o.mode.empty()) flags.mode = parse_mode(o.mode);
  if (o.max_steps) flags.max_steps = *o.max_steps;
  if (o.seed) flags.seed = *o.seed;
  if (flags.max_steps == 0) throw ConfigError("--max-steps must be at least 1");
  return sc.with_flags(flags);
}

Profile checked_profile(const MarketScenario& sc, const std::string& text) {
  if (text.empty()) return Profile(sc.agent_count(), 0);
  Profile p = parse_profile(text);
  if (p.size() != sc.agent_count()) {
    throw ConfigError("profile " + text + " has " + std::to_string(p.size()) + " entries, expected " +
                      std::to_string(sc.agent_count()));
  }
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] >= sc.profiles().grid_size(i)) {
      throw ConfigError("profile " + text + ": strategy " + std::to_string(p[i]) + " is outside the grid of " +
                        sc.agent(i).name);
    }
  }
  return p;
}

int cmd_ladder(const Options& o) {
  const MarketScenario sc = load(o);
  const Ladders ladders = compute_ladder(sc, sc.flags().mode, Execution::Serial);
  emit(o, dump(ladder_to_json(ladders, sc)));
  return kOk;
}

int cmd_arbitrage(const Options& o) {
  const MarketScenario sc = load(o);
  const Profile p = checked_profile(sc, o.profile);
  std::optional<Sdf> observed;
  if (!o.sdf.empty()) {
    RationalVector values;
    std::stringstream ss(o.sdf);
    for (std::string item; std::getline(ss, item, ',');) values.push_back(parse_rational(item));
    observed = Sdf::create(values, sc.space());
  }
  const Sdf& m = observed ? *observed : sc.map().aggregate(p);

  Json doc;
  doc["profile"] = profile_to_json(p);
  doc["sdf"] = rationals_to_json(m.values());
  Json agents = Json::array();
  bool any = false;
  for (std::size_t i = 0; i < sc.agent_count(); ++i) {
    const auto witness = dominated_wrtp(sc, i, p[i], m, Execution::Serial);
    Json a{{"agent", sc.agent(i).name}, {"strategy", p[i]}};
    if (!witness) {
      a["verdict"] = "none";
    } else {
      any = true;
      a["verdict"] = "arbitrage";
      a["dominator"] = *witness;
      // The plan is realized at a profile of the fibre; with the observed sdf
      // that is the given profile when it produces m, else the first one.
      const OpponentSet fibre = invert(sc.map(), m, i, p[i], Execution::Serial);
      const Profile& at = fibre.contains(p) ? p : fibre.profiles.front();
      const ArbitragePlan plan = build_arbitrage_portfolio(sc, i, p[i], *witness, at);
      a["plan"] = plan_to_json(plan.realized, sc);
      bool all = true;
      for (const auto& c : plan.consistent) all = all && plan_is_arbitrage(c, sc.space());
      a["verification"] = Json{{"consistent_profiles", plan.consistent.size()},
                               {"all_arbitrage", all},
                               {"realized_arbitrage", plan_is_arbitrage(plan.realized, sc.space())}};
    }
    agents.push_back(a);
  }
  doc["agents"] = agents;
  doc["verdict"] = any ? "arbitrage" : "none";
  emit(o, dump(doc));
  return kOk;
}

int cmd_tatonnement(const Options& o) {
  const MarketScenario sc = load(o);
  const Profile p = checked_profile(sc, o.profile);
  TatonnementTrace trace = run(sc, p, sc.flags().max_steps,
                               o.simultaneous ? RevisionPolicy::Simultaneous : RevisionPolicy::Sequential);
  const Ladders ladders = compute_ladder(sc, sc.flags().mode, Execution::Serial);
  annotate_order_jumps(trace, ladders, sc);
  emit(o, dump(trace_to_json(trace, sc)));
  switch (trace.status) {
    case TerminalStatus::NoArbitrage: return kOk;
    case TerminalStatus::CycleDetected: return kCycle;
    case TerminalStatus::MaxStepsExceeded: return kStepCap;
  }
  return kOk;
}

void apply_thread_cap() {
  if (const char* env = std::getenv("HIERARCHY_ARB_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || n < 1) throw ConfigError(std::string("HIERARCHY_ARB_THREADS must be a positive integer, got '") + env + "'");
    omp_set_num_threads(static_cast<int>(n));
  }
}

int cmd_verify(const Options& o) {
  apply_thread_cap();
  InstanceBounds bounds;
  if (!o.bounds.empty()) bounds = bounds_from_json(read_text(o.bounds), o.bounds);
  if (o.seed) bounds.seed = *o.seed;
  std::vector<MarketScenario> scenarios = enumerate_scenarios(bounds);
  std::vector<std::string> sources(scenarios.size(), "generated");
  std::vector<std::string> files = o.extra;
  if (!o.scenario.empty()) files.insert(files.begin(), o.scenario);
  for (const auto& path : files) {
    scenarios.push_back(load_scenario(path));
    sources.push_back(path);
  }
  if (!o.mode.empty() || o.max_steps) {
    for (auto& sc : scenarios) {
      ScenarioFlags f = sc.flags();
      if (!o.mode.empty()) f.mode = parse_mode(o.mode);
      if (o.max_steps) f.max_steps = *o.max_steps;
      sc = sc.with_flags(f);
    }
  }

  VerdictReport report = run_suite(scenarios, bounds.seed);
  Json doc = report_to_json(report, o.timing);

  if (report.failures() > 0) {
    std::filesystem::create_directories(o.replay_dir);
    for (std::size_t k = 0; k < report.counterexamples.size(); ++k) {
      const auto& c = report.counterexamples[k];
      const std::string path = (std::filesystem::path(o.replay_dir) /
                                (c.claim + "-" + std::to_string(c.scenario) + ".json")).string();
      write_text(path, dump(c.document));
      doc["counterexamples"][k]["replay"] = path;
      doc["counterexamples"][k]["source"] = sources[c.scenario];
    }
  }
  emit(o, dump(doc));
  if (report.failures() == 0) return kOk;
  std::cerr << "verification failed: " << report.failures() << " failing checks";
  for (const auto& [name, t] : report.claims) {
    if (t.fail) std::cerr << "\n  " << name << ": " << t.fail;
  }
  std::cerr << "\nreplay files in " << o.replay_dir << "\n";
  return kVerifyFailed;
}

struct Variant {
  std::string name;
  AggregationMap map;
};

Variant make_variant(const MarketScenario& sc, const std::string& spec) {
  const RationalVector base = sc.map().aggregate_index(0).values();
  if (spec == "own") return {"own", sc.map()};
  if (spec == "constant") {
    return {spec, AggregationMap(AggregationSpec{spec, AggregationSpec::Constant{base}}, sc.space(), sc.agents())};
  }
  if (spec == "zero-impact") {
    std::vector<RationalVector> zero(sc.assets().count(), RationalVector(sc.space().size(), Rational(0)));
    return {spec, AggregationMap(AggregationSpec{spec, AggregationSpec::DemandImpact{base, zero}}, sc.space(), sc.agents())};
  }
  if (spec == "injective") {
    return {spec, AggregationMap(AggregationSpec{spec, AggregationSpec::Injective{base, 0, Rational(1, 16)}},
                                 sc.space(), sc.agents())};
  }
  const MarketScenario other = load_scenario(spec);
  return {std::filesystem::path(spec).stem().string(), AggregationMap(other.map().spec(), sc.space(), sc.agents())};
}

int cmd_sweep(const Options& o) {
  const MarketScenario sc = load(o);
  const Ladders ladders = compute_ladder(sc, sc.flags().mode, Execution::Serial);
  std::vector<std::string> specs = o.variants;
  if (specs.empty()) specs = {"constant", "own", "injective"};
  std::vector<Variant> variants;
  for (const auto& s : specs) variants.push_back(make_variant(sc, s));

  // Order from least to most responsive; a variant moves ahead of an earlier
  // one only when it is strictly less responsive.
  std::vector<std::size_t> order;
  for (std::size_t v = 0; v < variants.size(); ++v) {
    auto pos = order.end();
    for (auto it = order.begin(); it != order.end(); ++it) {
      if (compare_responsiveness(variants[v].map, variants[*it].map) == Responsiveness::SecondAtLeastFirst &&
          compare_responsiveness(variants[*it].map, variants[v].map) != Responsiveness::Equal) {
        pos = it;
        break;
      }
    }
    order.insert(pos, v);
  }

  const auto& space = sc.profiles();
  std::vector<std::vector<std::optional<std::size_t>>> orders(variants.size());
  for (std::size_t v = 0; v < variants.size(); ++v) {
    for (std::size_t idx = 0; idx < space.size(); ++idx) {
      for (std::size_t i = 0; i < sc.agent_count(); ++i) {
        orders[v].push_back(minimal_order(variants[v].map, ladders, i, space.profile(idx)));
      }
    }
  }

  std::ostringstream csv;
  csv << "variant,kind,relation_to_previous,agent,profile,minimal_order\n";
  bool monotone = true;
  for (std::size_t r = 0; r < order.size(); ++r) {
    const std::size_t v = order[r];
    std::string rel = "first";
    if (r > 0) {
      const std::size_t u = order[r - 1];
      const Responsiveness cmp = compare_responsiveness(variants[u].map, variants[v].map);
      rel = cmp == Responsiveness::Incomparable ? "incomparable" : responsiveness_name(cmp);
      if (cmp == Responsiveness::SecondAtLeastFirst || cmp == Responsiveness::Equal) {
        for (std::size_t k = 0; k < orders[v].size(); ++k) {
          const auto& lo = orders[u][k];
          const auto& hi = orders[v][k];
          const bool ok = !hi || (lo && *hi >= *lo);
          monotone = monotone && ok;
        }
      }
    }
    std::size_t k = 0;
    for (std::size_t idx = 0; idx < space.size(); ++idx) {
      const std::string prof = "\"" + profile_string(space.profile(idx)) + "\"";
      for (std::size_t i = 0; i < sc.agent_count(); ++i, ++k) {
        csv << variants[v].name << ',' << kind_name(variants[v].map.kind()) << ',' << rel << ','
            << sc.agent(i).name << ',' << prof << ',' << (orders[v][k] ? std::to_string(*orders[v][k]) : "none")
            << '\n';
      }
    }
  }
  emit(o, csv.str());
  if (!monotone) {
    std::cerr << "minimal orders decrease along a comparable chain\n";
    return kVerifyFailed;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Arbitrage and hierarchies of beliefs over finite strategy grids"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* c, bool needs_scenario) {
    auto* opt = c->add_option("--scenario", o.scenario, "Scenario document (JSON)");
    if (needs_scenario) opt->required();
    c->add_option("--mode", o.mode, "Dominance quantifier")->check(CLI::IsMember({"uniform", "pointwise"}));
    c->add_option("--out", o.out, "Output file (default: stdout)");
    c->add_option("--seed", o.seed, "Seed");
    c->add_option("--max-steps", o.max_steps, "Step cap for the adjustment process");
  };

  auto* ladder = app.add_subcommand("ladder", "Iterated elimination ladder of every agent");
  common(ladder, true);

  auto* arbitrage = app.add_subcommand("arbitrage", "Dominated-wrtp witnesses and trade plans at a profile");
  common(arbitrage, true);
  arbitrage->add_option("--profile", o.profile, "Strategy indices, e.g. 0,2,1 (default: all zero)");
  arbitrage->add_option("--sdf", o.sdf, "Observed sdf as comma-separated rationals (default: the map's output)");

  auto* taton = app.add_subcommand("tatonnement", "Run the strategy adjustment process");
  common(taton, true);
  taton->add_option("--profile", o.profile, "Initial profile (default: all zero)");
  taton->add_flag("--simultaneous", o.simultaneous, "All dominated agents revise at once");

  auto* verify = app.add_subcommand("verify", "Check every claim over generated scenarios");
  common(verify, false);
  verify->add_option("--bounds", o.bounds, "Instance bounds (JSON)");
  verify->add_option("--extra", o.extra, "Additional scenario documents to check");
  verify->add_option("--replay-dir", o.replay_dir, "Where counterexample documents are written");
  verify->add_flag("--timing", o.timing, "Include wall time in the report");

  auto* sweep = app.add_subcommand("sweep", "Minimal orders across aggregation map variants (CSV)");
  common(sweep, true);
  sweep->add_option("--variant", o.variants,
                    "own | constant | zero-impact | injective | scenario file whose map is used");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }

  try {
    if (*ladder) return cmd_ladder(o);
    if (*arbitrage) return cmd_arbitrage(o);
    if (*taton) return cmd_tatonnement(o);
    if (*verify) return cmd_verify(o);
    if (*sweep) return cmd_sweep(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  }
  return kInput;
}
