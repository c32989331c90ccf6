#include <benchmark/benchmark.h>

#include "hierarb/oracle.hpp"

using namespace hierarb;

namespace {

// A market large enough for the kernels to matter: 3 agents with 8 strategies.
MarketScenario wide_scenario() {
  InstanceBounds b;
  b.max_states = 3;
  b.max_assets = 3;
  b.max_agents = 3;
  b.max_grid = 8;
  b.kinds = {AggregationKind::Tabular};
  for (std::size_t k = 0;; ++k) {
    MarketScenario sc = generate_scenario(b, k);
    if (sc.profiles().size() >= 200) return sc;
  }
}

const MarketScenario& scenario() {
  static const MarketScenario sc = wide_scenario();
  return sc;
}

void invert_all(benchmark::State& state, Execution exec) {
  const auto& sc = scenario();
  const auto& ps = sc.profiles();
  for (auto _ : state) {
    std::size_t total = 0;
    for (std::size_t idx = 0; idx < ps.size(); ++idx) total += invert_at(sc.map(), 0, ps.profile(idx), exec).profiles.size();
    benchmark::DoNotOptimize(total);
  }
}

void dominated_full(benchmark::State& state, Execution exec) {
  const auto& sc = scenario();
  const auto& ps = sc.profiles();
  StrategySet grid;
  for (std::size_t a = 0; a < ps.grid_size(0); ++a) grid.push_back(a);
  const auto opp = ps.with_fixed(0, 0);
  for (auto _ : state) benchmark::DoNotOptimize(dominated_set(sc, 0, opp, grid, DominanceMode::Uniform, exec));
}

void ladder(benchmark::State& state, Execution exec) {
  for (auto _ : state) benchmark::DoNotOptimize(compute_ladder(scenario(), DominanceMode::Uniform, exec));
}

}  // namespace

BENCHMARK_CAPTURE(invert_all, serial, Execution::Serial);
BENCHMARK_CAPTURE(invert_all, parallel, Execution::Parallel);
BENCHMARK_CAPTURE(dominated_full, serial, Execution::Serial);
BENCHMARK_CAPTURE(dominated_full, parallel, Execution::Parallel);
BENCHMARK_CAPTURE(ladder, serial, Execution::Serial);
BENCHMARK_CAPTURE(ladder, parallel, Execution::Parallel);

BENCHMARK_MAIN();
