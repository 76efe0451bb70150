#include <benchmark/benchmark.h>

#include <random>

#include "dynamask/diffvote.hpp"
#include "dynamask/morphology.hpp"
#include "dynamask/pipeline.hpp"
#include "dynamask/superpixel.hpp"
#include "dynamask/synthgen.hpp"

using namespace dynamask;

namespace {

SceneSpec street(int side) {
  SceneSpec s;
  s.width = side;
  s.height = side * 3 / 4;
  s.noise_sigma = 4.0;
  s.background = {BackgroundKind::texture, 90, 20.0, 16};
  s.movers.push_back({MoverShape::rectangle, side / 8, side / 10, 210, 4, side / 3.0, side / 40.0, 0});
  s.movers.push_back({MoverShape::ellipse, side / 10, side / 10, 30, side * 0.8, side / 2.0, -side / 50.0, 0});
  return s;
}

BinaryMask noise_mask(int w, int h, double density) {
  std::mt19937 rng(1);
  std::bernoulli_distribution bit(density);
  BinaryMask m(w, h);
  for (std::size_t i = 0; i < m.size(); ++i) m.set(i, bit(rng));
  return m;
}

void BM_AbsDiff(benchmark::State& state) {
  const auto clip = generate(street(static_cast<int>(state.range(0)))).clip;
  for (auto _ : state) benchmark::DoNotOptimize(abs_diff(clip.ofs()[0], clip.ofs()[1]));
  state.SetItemsProcessed(state.iterations() * clip.width() * clip.height());
}
BENCHMARK(BM_AbsDiff)->Arg(256)->Arg(1024);

void BM_ThresholdAdf(benchmark::State& state) {
  const auto clip = generate(street(static_cast<int>(state.range(0)))).clip;
  const AbsDiffFrame adf = abs_diff(clip.ofs()[0], clip.ofs()[5]);
  for (auto _ : state) benchmark::DoNotOptimize(threshold_adf(adf));
  state.SetItemsProcessed(state.iterations() * clip.width() * clip.height());
}
BENCHMARK(BM_ThresholdAdf)->Arg(256)->Arg(1024);

void BM_Segment(benchmark::State& state) {
  const auto clip = generate(street(static_cast<int>(state.range(0)))).clip;
  const SuperpixelConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(segment(clip.ofs()[0], cfg));
}
BENCHMARK(BM_Segment)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_Dilate(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const BinaryMask m = noise_mask(side, side, 0.05);
  const MorphConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(dilate(m, cfg));
}
BENCHMARK(BM_Dilate)->Arg(256)->Arg(1024);

void BM_ConnectedComponents(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const BinaryMask m = noise_mask(side, side, 0.4);
  for (auto _ : state) benchmark::DoNotOptimize(connected_components(m));
}
BENCHMARK(BM_ConnectedComponents)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_ExtractQuery(benchmark::State& state) {
  const ClipFrameSet clip = sample_tfs(generate(street(static_cast<int>(state.range(0)))).clip, 5);
  const PipelineConfig cfg;
  const auto jobs = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(extract_query_mask(clip, clip.tfs_indices()[2], cfg, jobs));
}
BENCHMARK(BM_ExtractQuery)->Args({256, 1})->Args({512, 1})->Args({512, 4})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
