#include <benchmark/benchmark.h>

#include "dvsb/contrastive.hpp"
#include "dvsb/pair_factory.hpp"
#include "dvsb/rng.hpp"
#include "dvsb/synthetic.hpp"
#include "dvsb/temporal_filter.hpp"

namespace {

void BM_SynthesizeClip(benchmark::State& state) {
  const int threads = static_cast<int>(state.range(0));
  const dvsb::RealClip real = dvsb::make_synthetic_face_clip(1, 16, 224, 224);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    const dvsb::ParamTrack track = dvsb::prepare_track(seed++ % 8, 16, dvsb::Stage::kPretrain,
                                                       dvsb::TemporalMode::dynamic_low(), {});
    benchmark::DoNotOptimize(dvsb::synthesize_clip(real.frames, real.landmarks, track, threads));
  }
}
BENCHMARK(BM_SynthesizeClip)->Arg(1)->Arg(2)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_Dct(benchmark::State& state) {
  dvsb::Rng rng(3);
  std::vector<double> x(static_cast<std::size_t>(state.range(0)));
  for (double& v : x) v = rng.normal();
  for (auto _ : state) benchmark::DoNotOptimize(dvsb::dct(x));
}
BENCHMARK(BM_Dct)->Arg(16)->Arg(64)->Arg(256);

void BM_FilterTrack(benchmark::State& state) {
  const dvsb::ParamTrack track =
      dvsb::sample_track(5, 16, dvsb::Stage::kPretrain, dvsb::TemporalMode::dynamic_mid(), {});
  for (auto _ : state) benchmark::DoNotOptimize(dvsb::filter_track(track, {3.0, 2.0}));
}
BENCHMARK(BM_FilterTrack);

void BM_NtXent(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  dvsb::Rng rng(9);
  dvsb::EmbeddingBatch batch;
  batch.tau = 0.1;
  for (std::size_t i = 0; i < 2 * n; ++i) {
    dvsb::Embedding v(128);
    for (double& x : v) x = rng.normal();
    batch.vectors.push_back(std::move(v));
    batch.pair_map.push_back(static_cast<int>(i ^ 1U));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(dvsb::nt_xent_loss(batch));
    benchmark::DoNotOptimize(dvsb::nt_xent_grad(batch));
  }
}
BENCHMARK(BM_NtXent)->Arg(8)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
