#include <benchmark/benchmark.h>

#include "vidomit/raster.hpp"
#include "vidomit/rng.hpp"

using namespace vidomit;

namespace {

Frame random_frame(std::uint64_t seed, int w, int h) {
  SplitMix64 rng(seed);
  Frame f(w, h);
  for (auto& s : f.data) s = static_cast<std::uint8_t>(rng.next_below(256));
  return f;
}

}  // namespace

static void BM_ResizeBilinear(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const Frame src = random_frame(1, 640, 360);
  for (auto _ : state) {
    Frame out = resize_bilinear(src, side, side);
    benchmark::DoNotOptimize(out.data.data());
  }
  state.SetItemsProcessed(state.iterations() * side * side);
}
BENCHMARK(BM_ResizeBilinear)->Arg(64)->Arg(144)->Arg(512);

static void BM_AlphaBlend(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const Frame base = random_frame(2, side, side);
  const Frame over = random_frame(3, side, side);
  for (auto _ : state) {
    Frame out = alpha_blend(base, over, 0.5);
    benchmark::DoNotOptimize(out.data.data());
  }
  state.SetItemsProcessed(state.iterations() * side * side);
}
BENCHMARK(BM_AlphaBlend)->Arg(256)->Arg(720);

static void BM_PasteRegion(benchmark::State& state) {
  const Frame base = random_frame(4, 720, 720);
  const Frame patch = random_frame(5, 144, 144);
  const Region region{576, 576, 144, 144};
  for (auto _ : state) {
    Frame out = paste_region(base, patch, region);
    benchmark::DoNotOptimize(out.data.data());
  }
}
BENCHMARK(BM_PasteRegion);
