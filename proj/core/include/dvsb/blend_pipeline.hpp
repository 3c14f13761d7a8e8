#pragma once

#include <array>
#include <span>
#include <vector>

#include "dvsb/image.hpp"
#include "dvsb/manifest.hpp"
#include "dvsb/mask_engine.hpp"
#include "dvsb/param_space.hpp"

namespace dvsb {

// Mask-weighted per-channel mean and population standard deviation.
struct MaskedStats {
  std::array<double, 3> mean{};
  std::array<double, 3> std{};
};

// Throws InputError when the mask has no weight or shapes differ.
MaskedStats masked_stats(const Frame& frame, const Mask& weights);

// Remaps source pixels inside the mask support so their mask-weighted
// statistics match the target's: s' = std_t * (s - mean_s) / std_s + mean_t.
// Pixels outside the support are copied. No clamping.
// Throws DegenerateStatistics if a source channel has zero spread.
Frame madain_unclamped(const Frame& source, const Frame& target, const Mask& mask);
// madain_unclamped followed by clamping to [0, 1].
Frame madain(const Frame& source, const Frame& target, const Mask& mask);

// m * source + (1 - m) * target.
Frame alpha_blend(const Frame& source, const Frame& target, const Mask& soft_mask);

struct ComposedFrame {
  Frame frame;
  Mask mask;  // soft blending mask
  bool madain_skipped = false;
};

// One self-blended frame. Order: color then quality on the perturbed
// duplicate, hull mask, elastic deformation, joint dislocation of source and
// mask, optional MAdaIN on the pre-blur support, mask softening, blend.
// `field` may carry the clip's precomputed displacement basis.
ComposedFrame compose_frame(const Frame& real, const LandmarkSet& landmarks,
                            const ForgeryParams& params, const ClipFields& clip,
                            const DisplacementField* field = nullptr);

struct SynthesizedClip {
  std::vector<Frame> frames;
  std::vector<Mask> masks;
  Manifest manifest;
};

// Runs compose_frame for every frame with its own parameters. Output does
// not depend on `threads`.
// Throws ConsistencyError on length mismatches and StateError when a
// Dynamic-mode track has not been filtered.
SynthesizedClip synthesize_clip(std::span<const Frame> frames,
                                std::span<const LandmarkSet> landmarks, const ParamTrack& track,
                                int threads = 1);

}  // namespace dvsb
