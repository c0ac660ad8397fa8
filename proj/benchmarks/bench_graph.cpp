#include <benchmark/benchmark.h>

#include <homofair/graph.hpp>
#include <homofair/inequality.hpp>
#include <homofair/spectral.hpp>

using namespace homofair;

namespace {

Graph blocks(int per_block, int count) {
  return sbm_sample(SBMParams::homophilous(std::vector<int>(static_cast<std::size_t>(count), per_block),
                                           0.1, 0.005, 11));
}

void BM_Louvain(benchmark::State& state) {
  const Graph g = blocks(static_cast<int>(state.range(0)), 8);
  for (auto _ : state) benchmark::DoNotOptimize(louvain(g, {1.0, 3}));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(g.edge_count()));
}
BENCHMARK(BM_Louvain)->Arg(50)->Arg(200)->Arg(800)->Unit(benchmark::kMillisecond);

void BM_Eigenmaps(benchmark::State& state) {
  const Graph g = blocks(static_cast<int>(state.range(0)), 4);
  for (auto _ : state) benchmark::DoNotOptimize(laplacian_eigenmaps(g, {4}));
}
BENCHMARK(BM_Eigenmaps)->Arg(50)->Arg(100)->Arg(250)->Unit(benchmark::kMillisecond);

void BM_CosineKernel(benchmark::State& state) {
  const Embedding emb = laplacian_eigenmaps(blocks(static_cast<int>(state.range(0)), 4), {4});
  for (auto _ : state) benchmark::DoNotOptimize(cosine_kernel(emb));
}
BENCHMARK(BM_CosineKernel)->Arg(100)->Arg(250)->Unit(benchmark::kMillisecond);

void BM_GroupFreeInequality(benchmark::State& state) {
  const Graph g = blocks(static_cast<int>(state.range(0)), 4);
  const Kernel k = cosine_kernel(laplacian_eigenmaps(g, {3}));
  Vector y(g.node_count());
  for (Eigen::Index i = 0; i < y.size(); ++i) y[i] = (i * 7919) % 3 == 0 ? 1.0 : 0.0;
  for (auto _ : state) benchmark::DoNotOptimize(group_free_inequality(k, y));
}
BENCHMARK(BM_GroupFreeInequality)->Arg(100)->Arg(250)->Unit(benchmark::kMicrosecond);

}  // namespace
