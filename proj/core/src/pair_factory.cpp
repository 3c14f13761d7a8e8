#include "dvsb/pair_factory.hpp"

#include <string>

#include "dvsb/error.hpp"
#include "dvsb/parallel.hpp"
#include "dvsb/rng.hpp"
#include "dvsb/temporal_filter.hpp"

namespace dvsb {

namespace {

void check_real(const RealClip& real, std::string_view name) {
  if (real.frames.size() != real.landmarks.size()) {
    throw ConsistencyError(std::string(name) + ": " + std::to_string(real.frames.size()) +
                           " frames but " + std::to_string(real.landmarks.size()) +
                           " landmark sets");
  }
  if (real.length() < 2) throw InputError(std::string(name) + ": clip needs at least 2 frames");
}

}  // namespace

ParamTrack prepare_track(const TrackSeeds& seeds, std::uint64_t master_seed, int length,
                         Stage stage, const TemporalMode& mode, const ParamRanges& ranges) {
  ParamTrack track = sample_track(seeds, length, stage, mode, ranges);
  track.seed = master_seed;
  if (mode.kind == TemporalMode::Kind::kDynamic) {
    track = filter_track(track, sample_filter_spec(seeds, mode, ranges));
  }
  return track;
}

ParamTrack prepare_track(std::uint64_t seed, int length, Stage stage, const TemporalMode& mode,
                         const ParamRanges& ranges) {
  return prepare_track(TrackSeeds::from_master(seed), seed, length, stage, mode, ranges);
}

std::pair<TrackSeeds, TrackSeeds> pair_seeds(std::uint64_t seed) noexcept {
  const std::uint64_t blend = derive_seed(seed, "pair-blend");
  return {TrackSeeds{derive_seed(seed, "pair-a-appearance"), blend, derive_seed(seed, "pair-a-madain")},
          TrackSeeds{derive_seed(seed, "pair-b-appearance"), blend, derive_seed(seed, "pair-b-madain")}};
}

PositivePair gen_positive_pair(const RealClip& real_a, const RealClip& real_b, std::uint64_t seed,
                               const GenerationOptions& options) {
  check_real(real_a, "first clip");
  check_real(real_b, "second clip");
  if (real_a.length() != real_b.length()) {
    throw ConsistencyError("positive pair clips differ in length: " +
                           std::to_string(real_a.length()) + " vs " +
                           std::to_string(real_b.length()));
  }
  const auto [seeds_a, seeds_b] = pair_seeds(seed);
  const int length = real_a.length();
  const ParamTrack track_a =
      prepare_track(seeds_a, seed, length, Stage::kPretrain, options.mode, options.ranges);
  const ParamTrack track_b =
      prepare_track(seeds_b, seed, length, Stage::kPretrain, options.mode, options.ranges);
  return PositivePair{synthesize_clip(real_a.frames, real_a.landmarks, track_a, options.threads),
                      synthesize_clip(real_b.frames, real_b.landmarks, track_b, options.threads)};
}

SynthesizedClip gen_stage2_sample(const RealClip& real, std::uint64_t seed,
                                  const GenerationOptions& options) {
  check_real(real, "clip");
  const ParamTrack track =
      prepare_track(seed, real.length(), Stage::kFinetune, options.mode, options.ranges);
  return synthesize_clip(real.frames, real.landmarks, track, options.threads);
}

Batch build_batch(std::span<const RealClip> reals, std::uint64_t seed,
                  const GenerationOptions& options) {
  if (reals.empty() || reals.size() % 2 != 0) {
    throw InputError("build_batch needs an even, non-zero number of clips, got " +
                     std::to_string(reals.size()));
  }
  for (std::size_t i = 0; i < reals.size(); ++i) {
    for (std::size_t j = i + 1; j < reals.size(); ++j) {
      if (reals[i].frames == reals[j].frames) {
        throw InputError("build_batch: clips " + std::to_string(i) + " and " + std::to_string(j) +
                         " are identical");
      }
    }
  }

  const std::size_t pairs = reals.size() / 2;
  Batch batch;
  batch.clips.resize(reals.size());
  batch.pair_map.resize(reals.size());
  GenerationOptions per_pair = options;
  per_pair.threads = 1;
  parallel_for(pairs, options.threads, [&](std::size_t i) {
    PositivePair pair =
        gen_positive_pair(reals[2 * i], reals[2 * i + 1], derive_seed(seed, i), per_pair);
    batch.clips[2 * i] = std::move(pair.a);
    batch.clips[2 * i + 1] = std::move(pair.b);
  });
  for (std::size_t i = 0; i < pairs; ++i) {
    batch.pair_map[2 * i] = static_cast<int>(2 * i + 1);
    batch.pair_map[2 * i + 1] = static_cast<int>(2 * i);
  }
  return batch;
}

SynthesizedClip resynthesize(const RealClip& real, const Manifest& manifest, int threads) {
  return synthesize_clip(real.frames, real.landmarks, manifest.track, threads);
}

}  // namespace dvsb
