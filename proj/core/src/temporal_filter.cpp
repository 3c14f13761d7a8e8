#include "dvsb/temporal_filter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "dvsb/error.hpp"
#include "dvsb/param_space.hpp"

namespace dvsb {

namespace {

void require_nonempty(std::span<const double> v, const char* what) {
  if (v.empty()) throw InputError(std::string(what) + ": empty input");
}

// basis[k][n] = s_k cos(pi (2n + 1) k / 2T), orthonormal rows.
std::vector<double> dct_basis(std::size_t n) {
  std::vector<double> basis(n * n);
  const double dc_scale = std::sqrt(1.0 / static_cast<double>(n));
  const double ac_scale = std::sqrt(2.0 / static_cast<double>(n));
  for (std::size_t k = 0; k < n; ++k) {
    const double s = k == 0 ? dc_scale : ac_scale;
    for (std::size_t i = 0; i < n; ++i) {
      basis[k * n + i] =
          s * std::cos(std::numbers::pi * static_cast<double>((2 * i + 1) * k) /
                       (2.0 * static_cast<double>(n)));
    }
  }
  return basis;
}

}  // namespace

std::vector<double> dct(std::span<const double> sequence) {
  require_nonempty(sequence, "dct");
  const std::size_t n = sequence.size();
  const std::vector<double> basis = dct_basis(n);
  std::vector<double> out(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += basis[k * n + i] * sequence[i];
    out[k] = acc;
  }
  return out;
}

std::vector<double> idct(std::span<const double> coeffs) {
  require_nonempty(coeffs, "idct");
  const std::size_t n = coeffs.size();
  const std::vector<double> basis = dct_basis(n);
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) acc += basis[k * n + i] * coeffs[k];
    out[i] = acc;
  }
  return out;
}

std::vector<double> gaussian_filter(std::span<const double> coeffs, const FilterSpec& spec) {
  require_nonempty(coeffs, "gaussian_filter");
  if (!(spec.sigma > 0.0)) throw ConfigError("filter sigma must be positive");

  // The 1/(sigma sqrt(2 pi)) factor and any common offset of the log-weights
  // cancel in the power renormalization, so weights are taken relative to the
  // largest one on a non-zero coefficient. That keeps them from underflowing.
  const std::size_t n = coeffs.size();
  std::vector<double> log_weight(n);
  double max_log = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double d = static_cast<double>(i + 1) - spec.mu;
    log_weight[i] = -(d * d) / (2.0 * spec.sigma * spec.sigma);
    if (coeffs[i] != 0.0) max_log = std::max(max_log, log_weight[i]);
  }
  if (max_log == -std::numeric_limits<double>::infinity()) {
    throw DegenerateSignal("gaussian_filter: all coefficients are zero");
  }

  double power = 0.0;
  double weighted_power = 0.0;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = std::exp(log_weight[i] - max_log) * coeffs[i];
    power += coeffs[i] * coeffs[i];
    weighted_power += out[i] * out[i];
  }
  if (!(weighted_power > 0.0)) {
    throw DegenerateSignal("gaussian_filter: filtered power underflowed");
  }
  const double scale = std::sqrt(power / weighted_power);
  for (double& v : out) v *= scale;
  return out;
}

std::vector<double> spectrum_power(std::span<const double> sequence) {
  std::vector<double> d = dct(sequence);
  for (double& v : d) v *= v;
  return d;
}

double spectral_centroid(std::span<const double> power) {
  double total = 0.0;
  double moment = 0.0;
  for (std::size_t i = 0; i < power.size(); ++i) {
    total += power[i];
    moment += static_cast<double>(i + 1) * power[i];
  }
  return total > 0.0 ? moment / total : 0.0;
}

std::optional<std::vector<double>> filter_channel(std::span<const double> normalized,
                                                  const FilterSpec& spec) {
  if (std::all_of(normalized.begin(), normalized.end(), [](double v) { return v == 0.0; })) {
    return std::nullopt;
  }
  return idct(gaussian_filter(dct(normalized), spec));
}

ParamTrack filter_track(const ParamTrack& track, const FilterSpec& spec) {
  if (track.filtered()) throw StateError("filter_track: track is already filtered");
  if (track.mode.kind != TemporalMode::Kind::kDynamic) {
    throw StateError("filter_track: only Dynamic-mode tracks are filtered, got " +
                     track.mode.name());
  }
  if (!(spec.sigma > 0.0)) throw ConfigError("filter sigma must be positive");

  ChannelMatrix channels = normalized_channels(track);
  const std::size_t length = channels.size();
  std::vector<int> skipped;
  std::vector<double> column(length);
  for (int c = 0; c < kChannelCount; ++c) {
    const auto ci = static_cast<std::size_t>(c);
    for (std::size_t t = 0; t < length; ++t) column[t] = channels[t][ci];
    const auto filtered = filter_channel(column, spec);
    if (!filtered) {
      skipped.push_back(c);
      continue;
    }
    for (std::size_t t = 0; t < length; ++t) channels[t][ci] = (*filtered)[t];
  }

  ParamTrack out = with_normalized_channels(track, channels);
  if (!skipped.empty()) {
    // Skipped channels keep their exact raw values.
    const ChannelMatrix raw = continuous_channels(track);
    ChannelMatrix merged = continuous_channels(out);
    for (int c : skipped) {
      for (std::size_t t = 0; t < length; ++t) {
        merged[t][static_cast<std::size_t>(c)] = raw[t][static_cast<std::size_t>(c)];
      }
    }
    out = with_channels(out, merged);
  }
  out.filter = spec;
  out.unfiltered_channels = std::move(skipped);
  return out;
}

}  // namespace dvsb
