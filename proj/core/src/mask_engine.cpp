#include "dvsb/mask_engine.hpp"

#include <algorithm>
#include <cmath>

#include "dvsb/error.hpp"
#include "dvsb/rng.hpp"

namespace dvsb {

namespace {

constexpr std::array<int, 6> kLeftEye = {36, 37, 38, 39, 40, 41};
constexpr std::array<int, 6> kRightEye = {42, 43, 44, 45, 46, 47};
constexpr std::array<int, 9> kNose = {27, 28, 29, 30, 31, 32, 33, 34, 35};
constexpr std::array<int, 20> kMouth = {48, 49, 50, 51, 52, 53, 54, 55, 56, 57,
                                        58, 59, 60, 61, 62, 63, 64, 65, 66, 67};

double cross(const Point& o, const Point& a, const Point& b) noexcept {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Sets every pixel center inside or on the convex polygon `hull` to 1.
void rasterize_hull(const std::vector<Point>& hull, Mask& mask) {
  double min_x = hull[0].x, max_x = hull[0].x, min_y = hull[0].y, max_y = hull[0].y;
  for (const Point& p : hull) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  const int x0 = std::max(0, static_cast<int>(std::ceil(min_x)));
  const int x1 = std::min(mask.width() - 1, static_cast<int>(std::floor(max_x)));
  const int y0 = std::max(0, static_cast<int>(std::ceil(min_y)));
  const int y1 = std::min(mask.height() - 1, static_cast<int>(std::floor(max_y)));

  const std::size_t n = hull.size();
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      const Point p{static_cast<double>(x), static_cast<double>(y)};
      bool inside = true;
      for (std::size_t i = 0; i < n && inside; ++i) {
        inside = cross(hull[i], hull[(i + 1) % n], p) >= 0.0;
      }
      if (inside) mask.at(y, x) = 1.0f;
    }
  }
}

void add_hull(const LandmarkSet& landmarks, std::span<const int> indices, Mask& mask,
              std::string_view what) {
  std::vector<Point> pts;
  pts.reserve(indices.size());
  for (int i : indices) pts.push_back(landmarks.points[static_cast<std::size_t>(i)]);
  const std::vector<Point> hull = convex_hull(std::move(pts));
  if (hull.size() < 3) {
    throw DegenerateGeometry("landmarks for " + std::string(what) +
                             " are collinear; cannot build a mask");
  }
  rasterize_hull(hull, mask);
}

}  // namespace

void LandmarkSet::validate() const {
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!std::isfinite(points[i].x) || !std::isfinite(points[i].y)) {
      throw InputError("landmark " + std::to_string(i) + " is not finite");
    }
  }
}

std::span<const int> part_indices(MaskScheme::Part part) noexcept {
  switch (part) {
    case MaskScheme::kLeftEye: return kLeftEye;
    case MaskScheme::kRightEye: return kRightEye;
    case MaskScheme::kNose: return kNose;
    case MaskScheme::kMouth: return kMouth;
  }
  return {};
}

FaceBox face_box(const LandmarkSet& landmarks) {
  double min_x = landmarks.points[0].x, max_x = min_x;
  double min_y = landmarks.points[0].y, max_y = min_y;
  for (const Point& p : landmarks.points) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  return FaceBox{min_x, min_y, std::max(1.0, max_x - min_x), std::max(1.0, max_y - min_y)};
}

std::vector<Point> convex_hull(std::vector<Point> points) {
  std::sort(points.begin(), points.end(), [](const Point& a, const Point& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.size() < 3) return points;

  std::vector<Point> hull(2 * points.size());
  std::size_t k = 0;
  for (const Point& p : points) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  const std::size_t lower = k + 1;
  for (auto it = points.rbegin() + 1; it != points.rend(); ++it) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], *it) <= 0.0) --k;
    hull[k++] = *it;
  }
  hull.resize(k - 1);
  return hull;
}

Mask hull_mask(const LandmarkSet& landmarks, MaskScheme scheme, int height, int width) {
  landmarks.validate();
  Mask mask(height, width, 0.0f);
  if (scheme.is_whole_face()) {
    std::array<int, LandmarkSet::kCount> all{};
    for (int i = 0; i < LandmarkSet::kCount; ++i) all[static_cast<std::size_t>(i)] = i;
    add_hull(landmarks, all, mask, "whole_face");
    return mask;
  }
  for (auto part : {MaskScheme::kLeftEye, MaskScheme::kRightEye, MaskScheme::kNose,
                    MaskScheme::kMouth}) {
    if (scheme.has(part)) add_hull(landmarks, part_indices(part), mask, scheme.name());
  }
  return mask;
}

DisplacementField DisplacementField::generate(int height, int width, std::uint64_t seed,
                                              double smooth_sigma) {
  Rng rng(derive_seed(seed, "displacement"));
  Image<2> noise(height, width);
  for (float& v : noise.values()) v = static_cast<float>(rng.normal());
  DisplacementField field;
  field.field_ = gaussian_blur(noise, smooth_sigma);
  float peak = 0.0f;
  for (float v : field.field_.values()) peak = std::max(peak, std::abs(v));
  if (peak > 0.0f) {
    for (float& v : field.field_.values()) v /= peak;
  }
  return field;
}

Mask elastic_deform(const Mask& mask, const DisplacementField& field, double amplitude,
                    const FaceBox& box) {
  if (amplitude < 0.0) throw InputError("deformation amplitude must be >= 0");
  if (amplitude == 0.0) return mask;
  if (field.height() != mask.height() || field.width() != mask.width()) {
    throw ConsistencyError("displacement field size does not match the mask");
  }
  const double scale = amplitude * box.diagonal();
  Mask out(mask.height(), mask.width());
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      out.at(y, x) = sample_bilinear(mask, y + scale * field.dy(y, x), x + scale * field.dx(y, x), 0);
    }
  }
  return out;
}

Mask elastic_deform(const Mask& mask, const DeformParams& params, const FaceBox& box) {
  if (params.amplitude == 0.0) return mask;
  const DisplacementField field = DisplacementField::generate(
      mask.height(), mask.width(), params.field_seed, params.smooth_sigma);
  return elastic_deform(mask, field, params.amplitude, box);
}

Mask soften_mask(const Mask& mask, const BlendParams& params) {
  if (!(params.kernel_sigma > 0.0)) throw InputError("blend kernel sigma must be positive");
  PixelRect roi = support_rect(mask);
  if (roi.empty()) return mask;

  // Blurring never reaches farther than iterations * radius from the
  // support, so the rest of the mask stays exactly zero.
  const int iterations = params.iterations();
  const int reach = iterations * gaussian_radius(params.kernel_sigma) + 1;
  roi = PixelRect{roi.x0 - reach, roi.y0 - reach, roi.x1 + reach, roi.y1 + reach};

  Mask out = mask;
  for (int i = 0; i < iterations; ++i) out = gaussian_blur_roi(out, params.kernel_sigma, roi);

  float peak = 0.0f;
  for (float v : out.values()) peak = std::max(peak, v);
  if (peak > 0.0f) {
    for (float& v : out.values()) v = std::min(1.0f, v / peak);
  }
  return out;
}

}  // namespace dvsb
