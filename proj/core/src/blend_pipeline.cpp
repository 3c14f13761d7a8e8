#include "dvsb/blend_pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "dvsb/error.hpp"
#include "dvsb/frame_ops.hpp"
#include "dvsb/parallel.hpp"

namespace dvsb {

MaskedStats masked_stats(const Frame& frame, const Mask& weights) {
  if (!frame.same_shape(weights)) throw ConsistencyError("masked_stats: frame and mask sizes differ");
  double total = 0.0;
  std::array<double, 3> sum{};
  for (int y = 0; y < frame.height(); ++y) {
    for (int x = 0; x < frame.width(); ++x) {
      const double w = weights.at(y, x);
      if (w <= 0.0) continue;
      total += w;
      for (int c = 0; c < 3; ++c) sum[static_cast<std::size_t>(c)] += w * frame.at(y, x, c);
    }
  }
  if (!(total > 0.0)) throw InputError("masked_stats: mask has zero total weight");

  MaskedStats stats;
  for (std::size_t c = 0; c < 3; ++c) stats.mean[c] = sum[c] / total;
  std::array<double, 3> sq{};
  for (int y = 0; y < frame.height(); ++y) {
    for (int x = 0; x < frame.width(); ++x) {
      const double w = weights.at(y, x);
      if (w <= 0.0) continue;
      for (int c = 0; c < 3; ++c) {
        const auto ci = static_cast<std::size_t>(c);
        const double d = frame.at(y, x, c) - stats.mean[ci];
        sq[ci] += w * d * d;
      }
    }
  }
  for (std::size_t c = 0; c < 3; ++c) stats.std[c] = std::sqrt(sq[c] / total);
  return stats;
}

Frame madain_unclamped(const Frame& source, const Frame& target, const Mask& mask) {
  if (!source.same_shape(target)) throw ConsistencyError("madain: source and target sizes differ");
  const MaskedStats s = masked_stats(source, mask);
  const MaskedStats t = masked_stats(target, mask);
  for (std::size_t c = 0; c < 3; ++c) {
    if (!(s.std[c] > 0.0)) {
      throw DegenerateStatistics("madain: source channel " + std::to_string(c) +
                                 " has zero spread inside the mask");
    }
  }

  std::array<double, 3> gain{};
  for (std::size_t c = 0; c < 3; ++c) gain[c] = t.std[c] / s.std[c];

  Frame out = source;
  for (int y = 0; y < source.height(); ++y) {
    for (int x = 0; x < source.width(); ++x) {
      if (mask.at(y, x) <= 0.0f) continue;
      for (int c = 0; c < 3; ++c) {
        const auto ci = static_cast<std::size_t>(c);
        out.at(y, x, c) =
            static_cast<float>(gain[ci] * (source.at(y, x, c) - s.mean[ci]) + t.mean[ci]);
      }
    }
  }
  return out;
}

Frame madain(const Frame& source, const Frame& target, const Mask& mask) {
  Frame out = madain_unclamped(source, target, mask);
  for (float& v : out.values()) v = std::clamp(v, 0.0f, 1.0f);
  return out;
}

Frame alpha_blend(const Frame& source, const Frame& target, const Mask& soft_mask) {
  if (!source.same_shape(target) || !source.same_shape(soft_mask)) {
    throw ConsistencyError("alpha_blend: source, target and mask sizes differ");
  }
  Frame out(source.height(), source.width());
  for (int y = 0; y < source.height(); ++y) {
    for (int x = 0; x < source.width(); ++x) {
      const float m = soft_mask.at(y, x);
      for (int c = 0; c < 3; ++c) {
        out.at(y, x, c) = m * source.at(y, x, c) + (1.0f - m) * target.at(y, x, c);
      }
    }
  }
  return out;
}

ComposedFrame compose_frame(const Frame& real, const LandmarkSet& landmarks,
                            const ForgeryParams& params, const ClipFields& clip,
                            const DisplacementField* field) {
  Frame source = real;
  Frame target = real;
  Frame& perturbed = clip.perturbed == Side::kSource ? source : target;
  perturbed = apply_quality(apply_color(perturbed, params.color),
                            QualityParams{clip.quality_mode, params.quality.strength});

  const FaceBox box = face_box(landmarks);
  Mask mask = hull_mask(landmarks, clip.scheme, real.height(), real.width());

  if (params.deform.amplitude != 0.0) {
    std::optional<DisplacementField> local;
    if (field == nullptr) {
      local = DisplacementField::generate(real.height(), real.width(), clip.field_seed,
                                          clip.smooth_sigma);
      field = &*local;
    }
    mask = elastic_deform(mask, *field, params.deform.amplitude, box);
  }

  source = apply_dislocation(source, params.dislocation, box);
  mask = apply_dislocation(mask, params.dislocation, box);

  ComposedFrame out;
  if (clip.madain) {
    try {
      source = madain(source, target, mask);
    } catch (const DegenerateStatistics&) {
      out.madain_skipped = true;
    }
  }

  out.mask = soften_mask(mask, params.blend);
  out.frame = alpha_blend(source, target, out.mask);
  return out;
}

SynthesizedClip synthesize_clip(std::span<const Frame> frames,
                                std::span<const LandmarkSet> landmarks, const ParamTrack& track,
                                int threads) {
  if (frames.size() != landmarks.size() ||
      frames.size() != static_cast<std::size_t>(track.length())) {
    throw ConsistencyError("synthesize_clip: " + std::to_string(frames.size()) + " frames, " +
                           std::to_string(landmarks.size()) + " landmark sets, track length " +
                           std::to_string(track.length()));
  }
  if (frames.empty()) throw InputError("synthesize_clip: empty clip");
  if (track.mode.kind == TemporalMode::Kind::kDynamic && !track.filtered()) {
    throw StateError("synthesize_clip: Dynamic-mode track has not been filtered");
  }
  for (const Frame& f : frames) {
    if (!f.same_shape(frames.front())) throw ConsistencyError("synthesize_clip: frame sizes differ");
  }

  const bool needs_field =
      std::any_of(track.frames.begin(), track.frames.end(),
                  [](const ForgeryParams& p) { return p.deform.amplitude != 0.0; });
  DisplacementField field;
  if (needs_field) {
    field = DisplacementField::generate(frames.front().height(), frames.front().width(),
                                        track.clip.field_seed, track.clip.smooth_sigma);
  }

  std::vector<ComposedFrame> composed(frames.size());
  parallel_for(frames.size(), threads, [&](std::size_t t) {
    composed[t] = compose_frame(frames[t], landmarks[t], track.frames[t], track.clip,
                                needs_field ? &field : nullptr);
  });

  SynthesizedClip clip;
  std::vector<int> skipped;
  clip.frames.reserve(composed.size());
  clip.masks.reserve(composed.size());
  for (std::size_t t = 0; t < composed.size(); ++t) {
    if (composed[t].madain_skipped) skipped.push_back(static_cast<int>(t));
    clip.frames.push_back(std::move(composed[t].frame));
    clip.masks.push_back(std::move(composed[t].mask));
  }
  clip.manifest = make_manifest(track, std::move(skipped));
  return clip;
}

}  // namespace dvsb
