#pragma once

#include "dvsb/image.hpp"
#include "dvsb/param_space.hpp"

namespace dvsb {

// Tight landmark bounding box in pixel coordinates; the reference frame for
// fractional translations and deformation amplitudes.
struct FaceBox {
  double x = 0.0;
  double y = 0.0;
  double w = 1.0;
  double h = 1.0;

  double center_x() const noexcept { return x + 0.5 * w; }
  double center_y() const noexcept { return y + 0.5 * h; }
  double diagonal() const noexcept;
};

// Hexcone HSV with hue in [0, 1). When channels tie for the maximum the hue
// sector is chosen in R > G > B priority.
struct Hsv {
  float h = 0.0f;
  float s = 0.0f;
  float v = 0.0f;
};
Hsv rgb_to_hsv(float r, float g, float b) noexcept;
void hsv_to_rgb(Hsv hsv, float& r, float& g, float& b) noexcept;

// RGB offsets, then HSV shift/scales, then contrast about 0.5, then
// brightness. Each stage is skipped when its parameters are the identity, so
// identity params reproduce the input exactly.
Frame apply_color(const Frame& frame, const ColorParams& params);

// Downscale mode: bilinear resize to floor(factor * dim) and back.
// Sharpen mode: unsharp mask against a sigma=1 Gaussian.
// Throws InputError when the downscaled size would be below one pixel.
Frame apply_quality(const Frame& frame, const QualityParams& params);

// Scales about the face box center, then translates by (tx * w, ty * h)
// pixels. Bilinear sampling, clamp-to-edge borders. Used identically on the
// source frame and its mask so the two stay aligned.
template <int C>
Image<C> apply_dislocation(const Image<C>& image, const DislocationParams& params,
                           const FaceBox& box);

}  // namespace dvsb
