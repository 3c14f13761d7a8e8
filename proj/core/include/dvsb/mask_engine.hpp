#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "dvsb/frame_ops.hpp"
#include "dvsb/image.hpp"
#include "dvsb/param_space.hpp"

namespace dvsb {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

// 68-point landmarks: jaw 0-16, brows 17-26, nose 27-35, left eye 36-41,
// right eye 42-47, mouth 48-67.
struct LandmarkSet {
  static constexpr int kCount = 68;
  std::array<Point, kCount> points{};

  // Throws InputError for non-finite coordinates.
  void validate() const;

  friend bool operator==(const LandmarkSet&, const LandmarkSet&) = default;
};

std::span<const int> part_indices(MaskScheme::Part part) noexcept;

// Tight bounding box; width and height are at least one pixel.
FaceBox face_box(const LandmarkSet& landmarks);

// Andrew's monotone chain, counter-clockwise in image coordinates, collinear
// points dropped.
std::vector<Point> convex_hull(std::vector<Point> points);

// Binary mask of pixel centers (integer coordinates) inside or on the hull.
// Part schemes take the union of each part's own hull.
// Throws DegenerateGeometry when a hull has zero area.
Mask hull_mask(const LandmarkSet& landmarks, MaskScheme scheme, int height, int width);

// Smoothed white-noise displacement basis, scaled to unit max-abs. Depends
// only on (size, seed, smooth_sigma), so a clip computes it once.
class DisplacementField {
 public:
  DisplacementField() = default;
  static DisplacementField generate(int height, int width, std::uint64_t seed,
                                    double smooth_sigma);

  int height() const noexcept { return field_.height(); }
  int width() const noexcept { return field_.width(); }
  float dx(int y, int x) const noexcept { return field_.at(y, x, 0); }
  float dy(int y, int x) const noexcept { return field_.at(y, x, 1); }

 private:
  Image<2> field_;
};

// Resamples the mask along amplitude * box-diagonal * field.
Mask elastic_deform(const Mask& mask, const DisplacementField& field, double amplitude,
                    const FaceBox& box);
Mask elastic_deform(const Mask& mask, const DeformParams& params, const FaceBox& box);

// Gaussian blur applied iterations() times, then rescaled so the peak is 1.
// Empty masks are returned unchanged.
Mask soften_mask(const Mask& mask, const BlendParams& params);

}  // namespace dvsb
