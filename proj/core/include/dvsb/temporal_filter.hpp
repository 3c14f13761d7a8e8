#pragma once

#include <optional>
#include <span>
#include <vector>

namespace dvsb {

struct ParamTrack;

// Gaussian weighting over DCT indices. Indices are 1-based, so mu <= 1 makes
// the weights monotonically low-pass.
struct FilterSpec {
  double mu = 0.0;
  double sigma = 1.0;

  friend bool operator==(const FilterSpec&, const FilterSpec&) = default;
};

// Orthonormal type-II DCT and its inverse (type-III). O(T^2); tracks are short.
std::vector<double> dct(std::span<const double> sequence);
std::vector<double> idct(std::span<const double> coeffs);

// Weights coefficient t (1-based) by g(t) = N(t; mu, sigma) and rescales the
// result so that the sum of squared coefficients is unchanged.
// Throws DegenerateSignal when every coefficient is zero.
std::vector<double> gaussian_filter(std::span<const double> coeffs, const FilterSpec& spec);

// Per-index power |D_t|^2 of the DCT of `sequence`.
std::vector<double> spectrum_power(std::span<const double> sequence);

// Power-weighted mean of the 1-based index; 0 for an all-zero spectrum.
double spectral_centroid(std::span<const double> power);

// dct -> gaussian_filter -> idct on one range-normalized channel, before any
// clamping. Returns nullopt for an identically-zero channel, which has no
// power to preserve and is left unfiltered.
std::optional<std::vector<double>> filter_channel(std::span<const double> normalized,
                                                  const FilterSpec& spec);

// Filters every continuous channel of a raw Dynamic-mode track with the same
// spec. Filtering happens in range-normalized coordinates; outputs are
// clamped back into each channel's range. Channels that are identically zero
// after normalization (or have an empty range) are left as-is and recorded in
// ParamTrack::unfiltered_channels.
// Throws StateError for already-filtered or non-Dynamic tracks.
ParamTrack filter_track(const ParamTrack& track, const FilterSpec& spec);

}  // namespace dvsb
