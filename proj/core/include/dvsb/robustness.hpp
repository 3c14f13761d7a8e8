#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "dvsb/image.hpp"

namespace dvsb {

enum class CorruptionKind {
  kSaturation,
  kContrast,
  kBlockwise,
  kGaussianNoise,
  kGaussianBlur,
  kPixelation,
  kCompression,
};
inline constexpr int kCorruptionKindCount = 7;
inline constexpr int kSeverityLevels = 5;

std::string_view to_string(CorruptionKind kind) noexcept;
// Throws ConfigError for an unknown name.
CorruptionKind parse_corruption_kind(std::string_view text);
std::array<CorruptionKind, kCorruptionKindCount> all_corruption_kinds() noexcept;

// Per-kind parameter at severities 1..5. Defaults are stand-ins modelled on
// common video corruption benchmarks.
struct SeverityTables {
  using Row = std::array<double, kSeverityLevels>;

  Row saturation{0.4, 0.3, 0.2, 0.1, 0.0};            // chroma retained
  Row contrast{0.85, 0.725, 0.6, 0.475, 0.35};        // contrast retained
  Row blockwise{16, 32, 48, 64, 80};                  // block count
  Row gaussian_noise{0.01, 0.02, 0.04, 0.06, 0.08};   // sigma
  Row gaussian_blur{0.5, 1.0, 1.5, 2.0, 3.0};         // sigma, pixels
  Row pixelation{0.5, 0.4, 0.3, 0.25, 0.2};           // downscale factor
  Row compression{60, 45, 30, 18, 10};                // quality factor

  const Row& row(CorruptionKind kind) const noexcept;
  Row& row(CorruptionKind kind) noexcept;
  // Throws ConfigError unless every row is strictly monotone in the
  // direction that increases damage, and within its domain.
  void validate() const;
};

nlohmann::json severity_tables_to_json(const SeverityTables& tables);
SeverityTables severity_tables_from_json(const nlohmann::json& j, SeverityTables base = {});

struct CorruptionSpec {
  CorruptionKind kind = CorruptionKind::kGaussianNoise;
  int severity = 1;  // 1..5
};

// Deterministic given the seed; frame i uses stream derive_seed(seed, i).
// Throws ConfigError for a severity outside 1..5.
Frame corrupt_frame(const Frame& frame, const CorruptionSpec& spec, std::uint64_t seed,
                    const SeverityTables& tables = {});
std::vector<Frame> corrupt(std::span<const Frame> clip, const CorruptionSpec& spec,
                           std::uint64_t seed, const SeverityTables& tables = {});

// 10 log10(1 / MSE) in dB; +infinity for identical frames.
// Throws InputError for a shape mismatch.
double psnr(const Frame& a, const Frame& b);

// Mann-Whitney AUC with midranks for ties. labels are 0/1.
// Throws UndefinedMetric unless both classes are present, InputError on a
// length mismatch.
double roc_auc(std::span<const double> scores, std::span<const int> labels);

}  // namespace dvsb
