#include <benchmark/benchmark.h>

#include <homofair/cascade.hpp>
#include <homofair/graph.hpp>

using namespace homofair;

namespace {

Graph skewed() { return sbm_sample(SBMParams::homophilous({150, 50}, 0.08, 0.01, 5)); }

void BM_EstimateActivation(benchmark::State& state) {
  const Graph g = skewed();
  const std::vector<NodeId> seeds{0, 160};
  const CascadeConfig cfg{0.1, static_cast<int>(state.range(0)), 9};
  for (auto _ : state) benchmark::DoNotOptimize(estimate_activation(g, seeds, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EstimateActivation)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_GreedyReach(benchmark::State& state) {
  const Graph g = skewed();
  const Objective reach{ObjectiveKind::reach, std::nullopt};
  for (auto _ : state) benchmark::DoNotOptimize(greedy_select(g, static_cast<int>(state.range(0)), reach, {0.1, 100, 9}));
}
BENCHMARK(BM_GreedyReach)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
