#include <benchmark/benchmark.h>

#include "sdf/data_io.hpp"
#include "sdf/forest.hpp"
#include "sdf/stream_tree.hpp"
#include "sdf/tree.hpp"

namespace {

sdf::Dataset blobs(std::size_t n, std::uint64_t seed) {
  sdf::SyntheticSpec spec;
  spec.kind = sdf::SyntheticKind::kBlobs;
  spec.n = n;
  spec.n_classes = 10;
  spec.noise = 3.0;
  spec.seed = seed;
  return sdf::gen_synthetic(spec);
}

void BM_TreeFit(benchmark::State& state) {
  const auto data = blobs(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sdf::DecisionTree::fit(data, sdf::SplitCriteria{}, 0));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TreeFit)->Arg(100)->Arg(1000)->Arg(5000);

void BM_StreamTreeUpdate(benchmark::State& state) {
  const auto first = blobs(100, 2);
  const auto batch = blobs(100, 3);
  for (auto _ : state) {
    state.PauseTiming();
    auto tree = sdf::StreamTree::init(first, 10, sdf::SplitCriteria{}, 0);
    state.ResumeTiming();
    tree.update(batch);
    benchmark::DoNotOptimize(tree);
  }
}
BENCHMARK(BM_StreamTreeUpdate);

void BM_StreamForestUpdate(benchmark::State& state) {
  const auto data = blobs(2000, 4);
  const sdf::BatchPlan plan(data.n_samples(), 100, 4);
  sdf::ForestOptions options;
  options.n_trees = static_cast<std::size_t>(state.range(0));
  auto forest = sdf::StreamForest::init(data.subset(plan.batch(0)), 10, options, 1);
  std::size_t b = 1;
  for (auto _ : state) {
    forest.update(data.subset(plan.batch(b)));
    b = b + 1 == plan.num_batches() ? 1 : b + 1;
  }
}
BENCHMARK(BM_StreamForestUpdate)->Arg(10)->Arg(100);

void BM_ForestPredict(benchmark::State& state) {
  const auto data = blobs(2000, 5);
  const auto forest = sdf::BatchForest::fit(data, sdf::ForestOptions{}, 1);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(forest.predict(data.row(i)));
    i = (i + 1) % data.n_samples();
  }
}
BENCHMARK(BM_ForestPredict);

}  // namespace
BENCHMARK_MAIN();
