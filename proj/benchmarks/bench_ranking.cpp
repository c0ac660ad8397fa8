#include <random>

#include <benchmark/benchmark.h>

#include <homofair/inequality.hpp>
#include <homofair/ranking.hpp>

using namespace homofair;

namespace {

PreferenceMatrix preferences(int n, int m) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  PreferenceMatrix rho(n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) rho(i, j) = u(rng);
  return rho;
}

Partition halves(int n) {
  Partition p(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i < n / 2 ? 0 : 1;
  return p;
}

void BM_LmoTopK(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const PositionWeights w = PositionWeights::dcg(m, 10);
  const Vector scores = preferences(1, m).row(0).transpose();
  for (auto _ : state) benchmark::DoNotOptimize(lmo_topk(scores, w));
}
BENCHMARK(BM_LmoTopK)->Arg(40)->Arg(400)->Arg(4000);

// Cost per Frank-Wolfe iteration: the gradient plus one LMO per user.
void BM_FrankWolfeIterations(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0)), m = 40;
  const PreferenceMatrix rho = preferences(n, m);
  const Kernel k = ground_truth_kernel(halves(n));
  const PositionWeights w = PositionWeights::dcg(m, 10);
  const RankingObjectiveConfig cfg{1.0, 0.1, KernelKind::ground_truth};
  for (auto _ : state) benchmark::DoNotOptimize(frank_wolfe(rho, k, w, cfg, {20, 0.0}));
  state.SetItemsProcessed(state.iterations() * 20);
}
BENCHMARK(BM_FrankWolfeIterations)->Arg(60)->Arg(240)->Unit(benchmark::kMillisecond);

void BM_RankingGradient(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0)), m = 40;
  const PreferenceMatrix rho = preferences(n, m);
  const Kernel k = ground_truth_kernel(halves(n));
  const ExposurePolicy p = sorted_policy(rho, PositionWeights::dcg(m, 10));
  const RankingObjectiveConfig cfg{1.0, 0.1, KernelKind::ground_truth};
  for (auto _ : state) benchmark::DoNotOptimize(ranking_gradient(p.e, rho, k, cfg));
}
BENCHMARK(BM_RankingGradient)->Arg(60)->Arg(240)->Unit(benchmark::kMicrosecond);

}  // namespace
