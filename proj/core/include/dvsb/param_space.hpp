#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dvsb/temporal_filter.hpp"

namespace dvsb {

enum class Stage { kPretrain, kFinetune };
enum class QualityMode { kDownscale, kSharpen };
// Which duplicate of the real frame receives the color and quality changes.
enum class Side { kSource, kTarget };

std::string_view to_string(Stage stage) noexcept;
std::string_view to_string(QualityMode mode) noexcept;
std::string_view to_string(Side side) noexcept;
Stage parse_stage(std::string_view text);
QualityMode parse_quality_mode(std::string_view text);
Side parse_side(std::string_view text);

struct Range {
  double low = 0.0;
  double high = 0.0;

  bool contains(double v) const noexcept { return v >= low && v <= high; }
  double clamp(double v) const noexcept { return v < low ? low : (v > high ? high : v); }
  double mid() const noexcept { return 0.5 * (low + high); }
  double half_width() const noexcept { return 0.5 * (high - low); }

  friend bool operator==(const Range&, const Range&) = default;
};

struct ColorParams {
  std::array<double, 3> rgb_offset{0.0, 0.0, 0.0};
  double hue_offset = 0.0;  // fraction of the hue circle
  double sat_scale = 1.0;
  double val_scale = 1.0;
  double contrast_scale = 1.0;
  double brightness_offset = 0.0;

  friend bool operator==(const ColorParams&, const ColorParams&) = default;
};

struct QualityParams {
  QualityMode mode = QualityMode::kSharpen;
  // Downscale factor in downscale mode, unsharp amount in sharpen mode.
  double strength = 0.0;

  friend bool operator==(const QualityParams&, const QualityParams&) = default;
};

struct DislocationParams {
  double scale_x = 1.0;
  double scale_y = 1.0;
  double translate_x = 0.0;  // fraction of face box width
  double translate_y = 0.0;  // fraction of face box height

  friend bool operator==(const DislocationParams&, const DislocationParams&) = default;
};

// WholeFace, or a non-empty union of facial parts.
class MaskScheme {
 public:
  enum Part : std::uint8_t {
    kLeftEye = 1,
    kRightEye = 2,
    kNose = 4,
    kMouth = 8,
  };
  static constexpr int kCount = 16;

  constexpr MaskScheme() = default;
  static constexpr MaskScheme whole_face() noexcept { return MaskScheme(); }
  // `parts` must be in [1, 15].
  static MaskScheme from_parts(std::uint8_t parts);
  // index 0 is WholeFace, 1..15 the part subsets.
  static MaskScheme from_index(int index);
  static std::array<MaskScheme, kCount> all() noexcept;
  static MaskScheme parse(std::string_view text);

  constexpr bool is_whole_face() const noexcept { return parts_ == 0; }
  constexpr bool has(Part part) const noexcept { return (parts_ & part) != 0; }
  constexpr std::uint8_t parts() const noexcept { return parts_; }
  constexpr int index() const noexcept { return parts_; }
  std::string name() const;

  friend constexpr bool operator==(MaskScheme, MaskScheme) = default;

 private:
  constexpr explicit MaskScheme(std::uint8_t parts) : parts_(parts) {}
  std::uint8_t parts_ = 0;
};

struct DeformParams {
  std::uint64_t field_seed = 0;
  double amplitude = 0.0;      // fraction of face box diagonal
  double smooth_sigma = 4.0;   // pixels

  friend bool operator==(const DeformParams&, const DeformParams&) = default;
};

struct BlendParams {
  double blur_level = 1.0;    // continuous; rounded to the iteration count
  double kernel_sigma = 1.0;  // pixels

  int iterations() const noexcept;

  friend bool operator==(const BlendParams&, const BlendParams&) = default;
};

struct ForgeryParams {
  ColorParams color;
  QualityParams quality;
  DislocationParams dislocation;
  DeformParams deform;
  BlendParams blend;

  friend bool operator==(const ForgeryParams&, const ForgeryParams&) = default;
};

// Continuous channel layout. Channels from kScaleX onward belong to the
// blending process {dislocation, deformation, blending}; the rest are the
// appearance channels {color, quality}.
enum Channel : int {
  kRed,
  kGreen,
  kBlue,
  kHue,
  kSaturation,
  kValue,
  kContrast,
  kBrightness,
  kQualityStrength,
  kScaleX,
  kScaleY,
  kTranslateX,
  kTranslateY,
  kDeformAmplitude,
  kBlurLevel,
  kKernelSigma,
  kChannelCount,
};

std::string_view channel_name(int channel);
int parse_channel(std::string_view name);
constexpr bool is_blend_channel(int channel) noexcept { return channel >= kScaleX; }

struct ParamRanges {
  Range rgb_offset{-0.08, 0.08};
  Range hue_offset{-0.05, 0.05};
  Range sat_scale{0.7, 1.3};
  Range val_scale{0.7, 1.3};
  Range contrast_scale{0.8, 1.2};
  Range brightness_offset{-0.1, 0.1};
  Range downscale_factor{0.25, 0.5};
  Range sharpen_amount{0.4, 1.0};
  Range scale{0.95, 1.05};
  Range translate{-0.03, 0.03};
  Range deform_amplitude{0.0, 0.02};
  Range deform_smooth_sigma{4.0, 8.0};
  Range blur_level{1.0, 3.0};
  Range kernel_sigma{1.0, 8.0};
  Range filter_sigma{1.0, 5.0};
  double madain_prob = 0.25;

  // Throws ConfigError on an inverted range or an out-of-domain bound.
  void validate() const;
  Range channel_range(int channel, QualityMode mode) const;

  friend bool operator==(const ParamRanges&, const ParamRanges&) = default;
};

struct TemporalMode {
  enum class Kind { kStatic, kIndependent, kDynamic };

  Kind kind = Kind::kDynamic;
  // Interval mu is drawn from; meaningful for Dynamic only.
  double mu_low = -3.0;
  double mu_high = 3.0;

  static constexpr TemporalMode static_mode() noexcept { return {Kind::kStatic, 0.0, 0.0}; }
  static constexpr TemporalMode independent() noexcept { return {Kind::kIndependent, 0.0, 0.0}; }
  static constexpr TemporalMode dynamic_low() noexcept { return {Kind::kDynamic, -3.0, 3.0}; }
  static constexpr TemporalMode dynamic_mid() noexcept { return {Kind::kDynamic, 0.0, 6.0}; }
  static constexpr TemporalMode dynamic_high() noexcept { return {Kind::kDynamic, 3.0, 9.0}; }

  // "static", "independent", "dynamic-low", "dynamic-mid", "dynamic-high";
  // a Dynamic mode with other bounds is "dynamic".
  std::string name() const;
  static TemporalMode parse(std::string_view text);

  friend bool operator==(const TemporalMode&, const TemporalMode&) = default;
};

// Clip-level choices, constant over all frames.
struct ClipFields {
  QualityMode quality_mode = QualityMode::kSharpen;
  MaskScheme scheme;
  std::uint64_t field_seed = 0;
  double smooth_sigma = 4.0;
  Side perturbed = Side::kSource;
  bool madain = false;

  friend bool operator==(const ClipFields&, const ClipFields&) = default;
};

// Seeds of the three independent sampling streams of a track. Positive pairs
// share `blend` (which also drives the filter spec) and differ in the rest.
struct TrackSeeds {
  std::uint64_t appearance = 0;
  std::uint64_t blend = 0;
  std::uint64_t madain = 0;

  static TrackSeeds from_master(std::uint64_t seed) noexcept;

  friend bool operator==(const TrackSeeds&, const TrackSeeds&) = default;
};

struct ParamTrack {
  std::vector<ForgeryParams> frames;
  ClipFields clip;
  TemporalMode mode;
  Stage stage = Stage::kFinetune;
  std::optional<FilterSpec> filter;  // set once filtered
  std::vector<int> unfiltered_channels;
  std::uint64_t seed = 0;
  TrackSeeds seeds;
  ParamRanges ranges;

  int length() const noexcept { return static_cast<int>(frames.size()); }
  bool filtered() const noexcept { return filter.has_value(); }

  friend bool operator==(const ParamTrack&, const ParamTrack&) = default;
};

using ChannelRow = std::array<double, kChannelCount>;
using ChannelMatrix = std::vector<ChannelRow>;

// Samples a raw (unfiltered) track. Continuous channels are i.i.d. uniform per
// frame, except in Static mode where one draw is repeated. Pretrain draws the
// mask scheme from all 16 schemes; finetune always uses WholeFace.
// Throws InputError for length < 2 and ConfigError for invalid ranges.
ParamTrack sample_track(std::uint64_t seed, int length, Stage stage, const TemporalMode& mode,
                        const ParamRanges& ranges);
ParamTrack sample_track(const TrackSeeds& seeds, int length, Stage stage,
                        const TemporalMode& mode, const ParamRanges& ranges);

// Draws (mu, sigma) for a Dynamic mode from the blend stream of `seeds`.
FilterSpec sample_filter_spec(const TrackSeeds& seeds, const TemporalMode& mode,
                              const ParamRanges& ranges);

// T x kChannelCount view of the continuous channels and its inverse.
ChannelMatrix continuous_channels(const ParamTrack& track);
ParamTrack with_channels(const ParamTrack& track, const ChannelMatrix& channels);

// Channels mapped affinely from their range onto [-1, 1]. Channels with an
// empty range map to 0.
ChannelMatrix normalized_channels(const ParamTrack& track);
ParamTrack with_normalized_channels(const ParamTrack& track, const ChannelMatrix& normalized);

}  // namespace dvsb
