#include "dvsb/param_space.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dvsb/error.hpp"
#include "dvsb/rng.hpp"

namespace dvsb {

namespace {

constexpr std::array<std::string_view, kChannelCount> kChannelNames = {
    "rgb_offset_r",     "rgb_offset_g", "rgb_offset_b", "hue_offset",   "sat_scale",
    "val_scale",        "contrast_scale", "brightness_offset", "quality_strength",
    "scale_x",          "scale_y",      "translate_x",  "translate_y",  "deform_amplitude",
    "blur_level",       "kernel_sigma",
};

constexpr std::array<std::pair<MaskScheme::Part, std::string_view>, 4> kPartNames = {{
    {MaskScheme::kLeftEye, "left_eye"},
    {MaskScheme::kRightEye, "right_eye"},
    {MaskScheme::kNose, "nose"},
    {MaskScheme::kMouth, "mouth"},
}};

void check_range(const Range& r, std::string_view name) {
  if (!std::isfinite(r.low) || !std::isfinite(r.high) || r.low > r.high) {
    throw ConfigError("invalid range for " + std::string(name) + ": [" + std::to_string(r.low) +
                      ", " + std::to_string(r.high) + "]");
  }
}

void check_domain(bool ok, std::string_view what) {
  if (!ok) throw ConfigError("parameter range out of domain: " + std::string(what));
}

double& channel_ref(ForgeryParams& p, int channel) {
  switch (channel) {
    case kRed: return p.color.rgb_offset[0];
    case kGreen: return p.color.rgb_offset[1];
    case kBlue: return p.color.rgb_offset[2];
    case kHue: return p.color.hue_offset;
    case kSaturation: return p.color.sat_scale;
    case kValue: return p.color.val_scale;
    case kContrast: return p.color.contrast_scale;
    case kBrightness: return p.color.brightness_offset;
    case kQualityStrength: return p.quality.strength;
    case kScaleX: return p.dislocation.scale_x;
    case kScaleY: return p.dislocation.scale_y;
    case kTranslateX: return p.dislocation.translate_x;
    case kTranslateY: return p.dislocation.translate_y;
    case kDeformAmplitude: return p.deform.amplitude;
    case kBlurLevel: return p.blend.blur_level;
    case kKernelSigma: return p.blend.kernel_sigma;
    default: throw InputError("channel index out of range: " + std::to_string(channel));
  }
}

double channel_value(const ForgeryParams& p, int channel) {
  return channel_ref(const_cast<ForgeryParams&>(p), channel);
}

ForgeryParams frame_template(const ClipFields& clip) {
  ForgeryParams p;
  p.quality.mode = clip.quality_mode;
  p.deform.field_seed = clip.field_seed;
  p.deform.smooth_sigma = clip.smooth_sigma;
  return p;
}

}  // namespace

std::string_view to_string(Stage stage) noexcept {
  return stage == Stage::kPretrain ? "pretrain" : "finetune";
}

std::string_view to_string(QualityMode mode) noexcept {
  return mode == QualityMode::kDownscale ? "downscale" : "sharpen";
}

std::string_view to_string(Side side) noexcept {
  return side == Side::kSource ? "source" : "target";
}

Stage parse_stage(std::string_view text) {
  if (text == "pretrain" || text == "1") return Stage::kPretrain;
  if (text == "finetune" || text == "2") return Stage::kFinetune;
  throw ConfigError("unknown stage: " + std::string(text));
}

QualityMode parse_quality_mode(std::string_view text) {
  if (text == "downscale") return QualityMode::kDownscale;
  if (text == "sharpen") return QualityMode::kSharpen;
  throw ConfigError("unknown quality mode: " + std::string(text));
}

Side parse_side(std::string_view text) {
  if (text == "source") return Side::kSource;
  if (text == "target") return Side::kTarget;
  throw ConfigError("unknown side: " + std::string(text));
}

MaskScheme MaskScheme::from_parts(std::uint8_t parts) {
  if (parts == 0 || parts > 15) {
    throw ConfigError("mask part set must be a non-empty subset of 4 parts");
  }
  return MaskScheme(parts);
}

MaskScheme MaskScheme::from_index(int index) {
  if (index < 0 || index >= kCount) throw ConfigError("mask scheme index out of range");
  return MaskScheme(static_cast<std::uint8_t>(index));
}

std::array<MaskScheme, MaskScheme::kCount> MaskScheme::all() noexcept {
  std::array<MaskScheme, kCount> schemes;
  for (int i = 0; i < kCount; ++i) schemes[static_cast<std::size_t>(i)] = MaskScheme(static_cast<std::uint8_t>(i));
  return schemes;
}

std::string MaskScheme::name() const {
  if (is_whole_face()) return "whole_face";
  std::string out;
  for (const auto& [part, label] : kPartNames) {
    if (!has(part)) continue;
    if (!out.empty()) out += '+';
    out += label;
  }
  return out;
}

MaskScheme MaskScheme::parse(std::string_view text) {
  if (text == "whole_face") return whole_face();
  std::uint8_t parts = 0;
  while (!text.empty()) {
    const std::size_t plus = text.find('+');
    const std::string_view token = text.substr(0, plus);
    bool found = false;
    for (const auto& [part, label] : kPartNames) {
      if (token == label) {
        parts |= part;
        found = true;
      }
    }
    if (!found) throw ConfigError("unknown mask part: " + std::string(token));
    if (plus == std::string_view::npos) break;
    text.remove_prefix(plus + 1);
  }
  return from_parts(parts);
}

int BlendParams::iterations() const noexcept {
  return static_cast<int>(std::clamp(std::lround(blur_level), 1L, 3L));
}

std::string_view channel_name(int channel) {
  if (channel < 0 || channel >= kChannelCount) {
    throw InputError("channel index out of range: " + std::to_string(channel));
  }
  return kChannelNames[static_cast<std::size_t>(channel)];
}

int parse_channel(std::string_view name) {
  for (int c = 0; c < kChannelCount; ++c) {
    if (kChannelNames[static_cast<std::size_t>(c)] == name) return c;
  }
  throw InputError("unknown channel: " + std::string(name));
}

void ParamRanges::validate() const {
  check_range(rgb_offset, "rgb_offset");
  check_range(hue_offset, "hue_offset");
  check_range(sat_scale, "sat_scale");
  check_range(val_scale, "val_scale");
  check_range(contrast_scale, "contrast_scale");
  check_range(brightness_offset, "brightness_offset");
  check_range(downscale_factor, "downscale_factor");
  check_range(sharpen_amount, "sharpen_amount");
  check_range(scale, "scale");
  check_range(translate, "translate");
  check_range(deform_amplitude, "deform_amplitude");
  check_range(deform_smooth_sigma, "deform_smooth_sigma");
  check_range(blur_level, "blur_level");
  check_range(kernel_sigma, "kernel_sigma");
  check_range(filter_sigma, "filter_sigma");

  check_domain(sat_scale.low >= 0.0 && val_scale.low >= 0.0, "sat/val scale must be >= 0");
  check_domain(contrast_scale.low >= 0.0, "contrast_scale must be >= 0");
  check_domain(downscale_factor.low > 0.0 && downscale_factor.high <= 1.0,
               "downscale_factor must lie in (0, 1]");
  check_domain(sharpen_amount.low >= 0.0, "sharpen_amount must be >= 0");
  check_domain(scale.low > 0.0, "scale must be > 0");
  check_domain(deform_amplitude.low >= 0.0, "deform_amplitude must be >= 0");
  check_domain(deform_smooth_sigma.low > 0.0, "deform_smooth_sigma must be > 0");
  check_domain(blur_level.low >= 1.0 && blur_level.high <= 3.0, "blur_level must lie in [1, 3]");
  check_domain(kernel_sigma.low > 0.0, "kernel_sigma must be > 0");
  check_domain(filter_sigma.low > 0.0, "filter_sigma must be > 0");
  check_domain(madain_prob >= 0.0 && madain_prob <= 1.0, "madain_prob must lie in [0, 1]");
}

Range ParamRanges::channel_range(int channel, QualityMode mode) const {
  switch (channel) {
    case kRed:
    case kGreen:
    case kBlue: return rgb_offset;
    case kHue: return hue_offset;
    case kSaturation: return sat_scale;
    case kValue: return val_scale;
    case kContrast: return contrast_scale;
    case kBrightness: return brightness_offset;
    case kQualityStrength:
      return mode == QualityMode::kDownscale ? downscale_factor : sharpen_amount;
    case kScaleX:
    case kScaleY: return scale;
    case kTranslateX:
    case kTranslateY: return translate;
    case kDeformAmplitude: return deform_amplitude;
    case kBlurLevel: return blur_level;
    case kKernelSigma: return kernel_sigma;
    default: throw InputError("channel index out of range: " + std::to_string(channel));
  }
}

std::string TemporalMode::name() const {
  switch (kind) {
    case Kind::kStatic: return "static";
    case Kind::kIndependent: return "independent";
    case Kind::kDynamic:
      if (*this == dynamic_low()) return "dynamic-low";
      if (*this == dynamic_mid()) return "dynamic-mid";
      if (*this == dynamic_high()) return "dynamic-high";
      return "dynamic";
  }
  return "dynamic";
}

TemporalMode TemporalMode::parse(std::string_view text) {
  if (text == "static") return static_mode();
  if (text == "independent") return independent();
  if (text == "dynamic-low") return dynamic_low();
  if (text == "dynamic-mid") return dynamic_mid();
  if (text == "dynamic-high") return dynamic_high();
  throw ConfigError("unknown temporal mode: " + std::string(text));
}

TrackSeeds TrackSeeds::from_master(std::uint64_t seed) noexcept {
  return TrackSeeds{derive_seed(seed, "appearance"), derive_seed(seed, "blend"),
                    derive_seed(seed, "madain")};
}

ParamTrack sample_track(std::uint64_t seed, int length, Stage stage, const TemporalMode& mode,
                        const ParamRanges& ranges) {
  ParamTrack track = sample_track(TrackSeeds::from_master(seed), length, stage, mode, ranges);
  track.seed = seed;
  return track;
}

ParamTrack sample_track(const TrackSeeds& seeds, int length, Stage stage,
                        const TemporalMode& mode, const ParamRanges& ranges) {
  if (length < 2) throw InputError("clip length must be at least 2, got " + std::to_string(length));
  ranges.validate();
  if (mode.kind == TemporalMode::Kind::kDynamic && mode.mu_low > mode.mu_high) {
    throw ConfigError("temporal mode has mu_low > mu_high");
  }

  ParamTrack track;
  track.mode = mode;
  track.stage = stage;
  track.seeds = seeds;
  track.ranges = ranges;

  Rng appearance(seeds.appearance);
  Rng blend(seeds.blend);
  Rng madain(seeds.madain);

  ClipFields& clip = track.clip;
  clip.quality_mode = appearance.bernoulli(0.5) ? QualityMode::kDownscale : QualityMode::kSharpen;
  clip.perturbed = appearance.bernoulli(0.5) ? Side::kSource : Side::kTarget;
  clip.scheme = stage == Stage::kPretrain
                    ? MaskScheme::from_index(static_cast<int>(blend.below(MaskScheme::kCount)))
                    : MaskScheme::whole_face();
  clip.field_seed = blend.next_u64();
  clip.smooth_sigma = blend.uniform(ranges.deform_smooth_sigma.low, ranges.deform_smooth_sigma.high);
  clip.madain = madain.bernoulli(ranges.madain_prob);

  const bool frozen = mode.kind == TemporalMode::Kind::kStatic;
  const int draws = frozen ? 1 : length;
  track.frames.reserve(static_cast<std::size_t>(length));
  for (int t = 0; t < draws; ++t) {
    ForgeryParams p = frame_template(clip);
    for (int c = 0; c < kChannelCount; ++c) {
      const Range r = ranges.channel_range(c, clip.quality_mode);
      Rng& stream = is_blend_channel(c) ? blend : appearance;
      channel_ref(p, c) = stream.uniform(r.low, r.high);
    }
    track.frames.push_back(p);
  }
  while (track.length() < length) track.frames.push_back(track.frames.front());
  return track;
}

FilterSpec sample_filter_spec(const TrackSeeds& seeds, const TemporalMode& mode,
                              const ParamRanges& ranges) {
  if (mode.mu_low > mode.mu_high) throw ConfigError("temporal mode has mu_low > mu_high");
  Rng rng(derive_seed(seeds.blend, "filter"));
  FilterSpec spec;
  spec.mu = rng.uniform(mode.mu_low, mode.mu_high);
  spec.sigma = rng.uniform(ranges.filter_sigma.low, ranges.filter_sigma.high);
  return spec;
}

ChannelMatrix continuous_channels(const ParamTrack& track) {
  ChannelMatrix m(track.frames.size());
  for (std::size_t t = 0; t < track.frames.size(); ++t) {
    for (int c = 0; c < kChannelCount; ++c) {
      m[t][static_cast<std::size_t>(c)] = channel_value(track.frames[t], c);
    }
  }
  return m;
}

ParamTrack with_channels(const ParamTrack& track, const ChannelMatrix& channels) {
  if (channels.size() != track.frames.size()) {
    throw ConsistencyError("channel matrix has " + std::to_string(channels.size()) +
                           " rows for a track of length " + std::to_string(track.length()));
  }
  ParamTrack out = track;
  for (std::size_t t = 0; t < channels.size(); ++t) {
    for (int c = 0; c < kChannelCount; ++c) {
      channel_ref(out.frames[t], c) = channels[t][static_cast<std::size_t>(c)];
    }
  }
  return out;
}

ChannelMatrix normalized_channels(const ParamTrack& track) {
  ChannelMatrix m = continuous_channels(track);
  for (int c = 0; c < kChannelCount; ++c) {
    const Range r = track.ranges.channel_range(c, track.clip.quality_mode);
    const double half = r.half_width();
    for (auto& row : m) {
      double& v = row[static_cast<std::size_t>(c)];
      v = half > 0.0 ? (v - r.mid()) / half : 0.0;
    }
  }
  return m;
}

ParamTrack with_normalized_channels(const ParamTrack& track, const ChannelMatrix& normalized) {
  ChannelMatrix m = normalized;
  for (int c = 0; c < kChannelCount; ++c) {
    const Range r = track.ranges.channel_range(c, track.clip.quality_mode);
    for (auto& row : m) {
      double& v = row[static_cast<std::size_t>(c)];
      v = r.clamp(r.mid() + r.half_width() * std::clamp(v, -1.0, 1.0));
    }
  }
  return with_channels(track, m);
}

}  // namespace dvsb
