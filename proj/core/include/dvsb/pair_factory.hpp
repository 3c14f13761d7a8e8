#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dvsb/blend_pipeline.hpp"
#include "dvsb/image.hpp"
#include "dvsb/mask_engine.hpp"
#include "dvsb/param_space.hpp"

namespace dvsb {

struct RealClip {
  std::vector<Frame> frames;
  std::vector<LandmarkSet> landmarks;

  int length() const noexcept { return static_cast<int>(frames.size()); }
};

struct GenerationOptions {
  TemporalMode mode = TemporalMode::dynamic_low();
  ParamRanges ranges;
  int threads = 1;
};

// sample_track followed by filter_track when the mode is Dynamic.
ParamTrack prepare_track(const TrackSeeds& seeds, std::uint64_t master_seed, int length,
                         Stage stage, const TemporalMode& mode, const ParamRanges& ranges);
ParamTrack prepare_track(std::uint64_t seed, int length, Stage stage, const TemporalMode& mode,
                         const ParamRanges& ranges);

struct PositivePair {
  SynthesizedClip a;
  SynthesizedClip b;
};

// Seeds for the two members of pair `seed`: one shared blend stream, and
// independent appearance and MAdaIN streams.
std::pair<TrackSeeds, TrackSeeds> pair_seeds(std::uint64_t seed) noexcept;

// Two clips from two different real clips sharing one draw of the blending
// process {dislocation, mask scheme, deformation, blending} and its filter
// spec, with independent color and quality draws. Pretrain stage.
PositivePair gen_positive_pair(const RealClip& real_a, const RealClip& real_b, std::uint64_t seed,
                               const GenerationOptions& options = {});

// A finetune-stage fake with every parameter group freshly sampled.
SynthesizedClip gen_stage2_sample(const RealClip& real, std::uint64_t seed,
                                  const GenerationOptions& options = {});

struct Batch {
  std::vector<SynthesizedClip> clips;
  // Partner index of each clip; a fixed-point-free involution.
  std::vector<int> pair_map;
};

// Pairs reals (2i, 2i+1) into pair i with seed derive_seed(seed, i). Output
// is independent of options.threads.
// Throws InputError for an odd or zero count, or a pair with identical inputs.
Batch build_batch(std::span<const RealClip> reals, std::uint64_t seed,
                  const GenerationOptions& options = {});

// Re-runs synthesis from a manifest's recorded parameters.
SynthesizedClip resynthesize(const RealClip& real, const Manifest& manifest, int threads = 1);

}  // namespace dvsb
