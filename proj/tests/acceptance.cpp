// Release gate: one line per acceptance criterion, non-zero exit if any fails.
#include <chrono>
#include <cstdio>
#include <string>

#include <omp.h>

#include "helpers.hpp"
#include "hierarb/oracle.hpp"

using namespace hierarb;

namespace {

int failed = 0;

void line(int n, const std::string& name, bool ok, const std::string& detail) {
  std::printf("criterion %d %-28s %s  %s\n", n, name.c_str(), ok ? "PASS" : "FAIL", detail.c_str());
  if (!ok) ++failed;
}

std::string tally(const VerdictReport& r, const std::string& claim) {
  const auto& t = r.claims.at(claim);
  std::string s = claim + "{pass=" + std::to_string(t.pass) + " fail=" + std::to_string(t.fail) +
                  " vacuous=" + std::to_string(t.vacuous);
  if (t.gap) s += " gap=" + std::to_string(t.gap);
  if (t.skipped) s += " skipped=" + std::to_string(t.skipped);
  return s + "}";
}

std::size_t fails(const VerdictReport& r, std::initializer_list<const char*> claims) {
  std::size_t n = 0;
  for (const char* c : claims) n += r.claims.at(c).fail;
  return n;
}

std::string staircase_trace() {
  const auto sc = data_scenario("staircase.json");
  auto trace = run(sc, {3, 5}, sc.flags().max_steps);
  annotate_order_jumps(trace, compute_ladder(sc, sc.flags().mode, Execution::Parallel), sc);
  return dump(trace_to_json(trace, sc));
}

}  // namespace

int main() {
  const InstanceBounds bounds;  // defaults: 500 scenarios, <= 3 states/assets/agents, <= 4 strategies
  const auto scenarios = enumerate_scenarios(bounds);
  const int threads = std::max(2, omp_get_max_threads());

  omp_set_num_threads(threads);
  const auto start = std::chrono::steady_clock::now();
  const VerdictReport r = run_suite(scenarios, bounds.seed);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  line(1, "arbitrage-equivalence", scenarios.size() >= 500 && fails(r, {"arbitrage_equivalence"}) == 0 && secs < 60,
       std::to_string(scenarios.size()) + " scenarios " + tally(r, "arbitrage_equivalence") + " " +
           std::to_string(secs).substr(0, 5) + "s");

  line(2, "necessity-and-sufficiency", fails(r, {"necessity", "sufficiency"}) == 0,
       tally(r, "necessity") + " " + tally(r, "sufficiency"));

  line(3, "conditions-both-directions", fails(r, {"sufficient_condition", "necessary_condition"}) == 0,
       tally(r, "sufficient_condition") + " " + tally(r, "necessary_condition") + " " + tally(r, "condition_gap"));

  {
    const auto& t = r.claims.at("injective_map");
    const std::size_t maps = t.notes.count("maps_scanned") ? t.notes.at("maps_scanned") : 0;
    line(4, "injective-map-scan", maps >= 50 && t.fail == 0,
         std::to_string(maps) + " one-to-one maps " + tally(r, "injective_map"));
  }

  {
    const auto& t = r.claims.at("responsiveness_monotone");
    line(5, "responsiveness-monotone", t.pass + t.fail >= 50 && t.fail == 0,
         std::to_string(t.pass + t.fail) + " comparable pairs " + tally(r, "responsiveness_monotone"));
  }

  {
    long alpha = -1;
    const auto sc = data_scenario("staircase.json");
    auto trace = run(sc, {3, 5}, sc.flags().max_steps);
    annotate_order_jumps(trace, compute_ladder(sc, sc.flags().mode), sc);
    for (const auto& s : trace.steps) {
      if (s.alpha_kind == AlphaKind::Value && s.alpha == 3) alpha = 3;
    }
    line(6, "order-jump", alpha == 3 && fails(r, {"order_jump_nonnegative"}) == 0,
         "staircase jump " + std::to_string(alpha) + " " + tally(r, "order_jump_nonnegative"));
  }

  line(7, "structural-invariants",
       fails(r, {"ladder_nesting", "ladder_partition", "stabilization_bound", "inversion_roundtrip",
                 "arbitrage_exclusivity"}) == 0,
       tally(r, "ladder_nesting") + " " + tally(r, "ladder_partition") + " " + tally(r, "stabilization_bound") + " " +
           tally(r, "inversion_roundtrip") + " " + tally(r, "arbitrage_exclusivity"));

  {
    const std::string report_many = dump(report_to_json(r));
    const std::string trace_many = staircase_trace();
    omp_set_num_threads(1);
    const std::string report_one = dump(report_to_json(run_suite(scenarios, bounds.seed)));
    const std::string trace_one = staircase_trace();
    line(8, "determinism", report_one == report_many && trace_one == trace_many,
         "report and trace identical at 1 and " + std::to_string(threads) + " threads");
  }
  return failed == 0 ? 0 : 1;
}
