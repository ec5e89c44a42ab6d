#include <benchmark/benchmark.h>

#include "vidomit/coverage.hpp"
#include "vidomit/ingest.hpp"
#include "vidomit/rng.hpp"

using namespace vidomit;

static void BM_TokenizeAndPool(benchmark::State& state) {
  SplitMix64 rng(7);
  Frame frame(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)));
  for (auto& s : frame.data) s = static_cast<std::uint8_t>(rng.next_below(256));
  for (auto _ : state) {
    TokenGrid grid = tokenize_frame(frame, 14, 14);
    TokenGrid down = downsample_grid(grid, DownsampleMode::avg_pool_2x2);
    benchmark::DoNotOptimize(down.values.data());
  }
}
BENCHMARK(BM_TokenizeAndPool)->Arg(224)->Arg(448)->Arg(896);

static void BM_CaptureDistributionExact(benchmark::State& state) {
  const std::int64_t seg_len = state.range(0);
  for (auto _ : state) {
    CapturePMF pmf = capture_distribution_exact(2000, 16, seg_len);
    benchmark::DoNotOptimize(&pmf);
  }
}
BENCHMARK(BM_CaptureDistributionExact)->Arg(20)->Arg(120)->Arg(200);

static void BM_CaptureDistributionMC(benchmark::State& state) {
  for (auto _ : state) {
    CapturePMF pmf = capture_distribution_mc(2000, 16, 120, state.range(0), 42);
    benchmark::DoNotOptimize(&pmf);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CaptureDistributionMC)->Arg(1000)->Arg(10000);

BENCHMARK_MAIN();
