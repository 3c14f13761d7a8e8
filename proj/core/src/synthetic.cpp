#include "dvsb/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "dvsb/error.hpp"
#include "dvsb/rng.hpp"

namespace dvsb {

namespace {

constexpr double kPi = std::numbers::pi;

struct Identity {
  double eye_dx = 0.0;    // extra eye separation
  double eye_y = 0.0;
  double mouth_w = 0.0;
  double nose_len = 0.0;
  std::array<float, 3> skin{};
  std::array<float, 3> hair{};
  std::array<float, 3> iris{};
  std::array<float, 3> lips{};
  std::array<float, 3> bg_top{};
  std::array<float, 3> bg_bottom{};
};

void set_ellipse(LandmarkSet& set, int first, int count, double cx, double cy, double rx, double ry) {
  for (int k = 0; k < count; ++k) {
    const double phi = kPi - 2.0 * kPi * k / count;
    set.points[static_cast<std::size_t>(first + k)] = {cx + rx * std::cos(phi), cy - ry * std::sin(phi)};
  }
}

// Face-local layout; `open` in [0, 1] widens the mouth opening.
LandmarkSet face_layout(const Identity& id, double open) {
  LandmarkSet set;
  for (int i = 0; i <= 16; ++i) {
    const double theta = kPi - i * kPi / 16.0;
    set.points[static_cast<std::size_t>(i)] = {0.5 + 0.45 * std::cos(theta), 0.35 + 0.6 * std::sin(theta)};
  }
  const double eye_y = 0.4 + id.eye_y;
  const double left_x = 0.3 - id.eye_dx;
  const double right_x = 0.7 + id.eye_dx;
  for (int k = 0; k < 5; ++k) {
    const double s = k / 4.0;
    const double lift = 0.04 * std::sin(kPi * s);
    set.points[static_cast<std::size_t>(17 + k)] = {left_x - 0.13 + 0.26 * s, eye_y - 0.1 - lift};
    set.points[static_cast<std::size_t>(22 + k)] = {right_x - 0.13 + 0.26 * s, eye_y - 0.1 - lift};
  }
  const double nose_end = 0.58 + id.nose_len;
  for (int k = 0; k < 4; ++k) {
    set.points[static_cast<std::size_t>(27 + k)] = {0.5, 0.35 + k * (nose_end - 0.35) / 3.0};
  }
  for (int k = 0; k < 5; ++k) {
    const double s = k / 4.0;
    set.points[static_cast<std::size_t>(31 + k)] = {0.42 + 0.16 * s,
                                                    nose_end + 0.05 + 0.02 * std::sin(kPi * s)};
  }
  set_ellipse(set, 36, 6, left_x, eye_y, 0.08, 0.035);
  set_ellipse(set, 42, 6, right_x, eye_y, 0.08, 0.035);
  const double mouth_rx = 0.17 + id.mouth_w;
  set_ellipse(set, 48, 12, 0.5, 0.78, mouth_rx, 0.06 + 0.02 * open);
  set_ellipse(set, 60, 8, 0.5, 0.78, mouth_rx * 0.6, 0.01 + 0.03 * open);
  return set;
}

// Smooth value noise on a 32x32 lattice, sampled in [0, 1]^2.
class ValueNoise {
 public:
  explicit ValueNoise(Rng& rng) {
    for (float& v : grid_) v = static_cast<float>(rng.uniform(-1.0, 1.0));
  }
  float operator()(double u, double v) const noexcept {
    const double x = std::clamp(u, 0.0, 1.0) * (kSize - 1);
    const double y = std::clamp(v, 0.0, 1.0) * (kSize - 1);
    const int x0 = std::min(static_cast<int>(x), kSize - 2);
    const int y0 = std::min(static_cast<int>(y), kSize - 2);
    const double fx = x - x0;
    const double fy = y - y0;
    auto g = [&](int yy, int xx) { return grid_[static_cast<std::size_t>(yy * kSize + xx)]; };
    const double top = g(y0, x0) + fx * (g(y0, x0 + 1) - g(y0, x0));
    const double bottom = g(y0 + 1, x0) + fx * (g(y0 + 1, x0 + 1) - g(y0 + 1, x0));
    return static_cast<float>(top + fy * (bottom - top));
  }

 private:
  static constexpr int kSize = 32;
  std::array<float, kSize * kSize> grid_{};
};

double ellipse_r2(double u, double v, double cx, double cy, double rx, double ry) noexcept {
  const double a = (u - cx) / rx;
  const double b = (v - cy) / ry;
  return a * a + b * b;
}

std::array<float, 3> random_color(Rng& rng, double lo, double hi) {
  return {static_cast<float>(rng.uniform(lo, hi)), static_cast<float>(rng.uniform(lo, hi)),
          static_cast<float>(rng.uniform(lo, hi))};
}

}  // namespace

LandmarkSet template_landmarks() { return face_layout(Identity{}, 0.5); }

RealClip make_synthetic_face_clip(std::uint64_t seed, int length, int height, int width) {
  if (length < 1 || height < 16 || width < 16) {
    throw InputError("synthetic clip needs length >= 1 and frames of at least 16x16");
  }
  Rng rng(derive_seed(seed, "synthetic-face"));
  Identity id;
  id.eye_dx = rng.uniform(-0.03, 0.03);
  id.eye_y = rng.uniform(-0.03, 0.03);
  id.mouth_w = rng.uniform(-0.03, 0.03);
  id.nose_len = rng.uniform(-0.03, 0.03);
  const double tone = rng.uniform(0.35, 0.85);
  id.skin = {static_cast<float>(tone + rng.uniform(0.05, 0.15)), static_cast<float>(tone * rng.uniform(0.75, 0.9)),
             static_cast<float>(tone * rng.uniform(0.55, 0.75))};
  id.hair = random_color(rng, 0.05, 0.3);
  id.iris = random_color(rng, 0.1, 0.5);
  id.lips = {static_cast<float>(rng.uniform(0.5, 0.8)), static_cast<float>(rng.uniform(0.15, 0.3)),
             static_cast<float>(rng.uniform(0.2, 0.35))};
  id.bg_top = random_color(rng, 0.1, 0.9);
  id.bg_bottom = random_color(rng, 0.1, 0.9);
  const ValueNoise skin_noise(rng);
  const ValueNoise bg_noise(rng);

  const double box_w = width * rng.uniform(0.55, 0.6);
  const double box_h = std::min(box_w * 1.15, height * 0.8);
  const double cx = width * (0.5 + rng.uniform(-0.02, 0.02));
  const double cy = height * (0.5 + rng.uniform(-0.02, 0.02));
  const double phase_x = rng.uniform(0.0, 2.0 * kPi);
  const double phase_y = rng.uniform(0.0, 2.0 * kPi);
  const double phase_m = rng.uniform(0.0, 2.0 * kPi);
  const double speed = rng.uniform(0.15, 0.35);
  const double sway = width * rng.uniform(0.01, 0.03);

  RealClip clip;
  for (int t = 0; t < length; ++t) {
    const double x0 = cx + sway * std::sin(speed * t + phase_x) - box_w / 2.0;
    const double y0 = cy + 0.5 * sway * std::sin(0.7 * speed * t + phase_y) - box_h / 2.0;
    const double open = 0.5 + 0.5 * std::sin(0.9 * t + phase_m);
    const LandmarkSet local = face_layout(id, open);

    LandmarkSet lm;
    for (std::size_t i = 0; i < lm.points.size(); ++i) {
      lm.points[i] = {x0 + box_w * local.points[i].x, y0 + box_h * local.points[i].y};
    }

    const auto& p = local.points;
    auto brow_distance = [&](double u, double v, int first) {
      double best = 1e9;
      for (int k = first; k < first + 4; ++k) {
        const Point a = p[static_cast<std::size_t>(k)];
        const Point b = p[static_cast<std::size_t>(k + 1)];
        const double dx = b.x - a.x, dy = b.y - a.y;
        const double s = std::clamp(((u - a.x) * dx + (v - a.y) * dy) / (dx * dx + dy * dy), 0.0, 1.0);
        best = std::min(best, std::hypot(u - a.x - s * dx, v - a.y - s * dy));
      }
      return best;
    };
    const double eye_y = p[36].y;
    const double left_x = (p[36].x + p[39].x) / 2.0;
    const double right_x = (p[42].x + p[45].x) / 2.0;
    const double mouth_rx = (p[54].x - p[48].x) / 2.0;
    const double outer_ry = p[51].y < 0.78 ? 0.78 - p[51].y : 0.06;
    const double inner_ry = 0.78 - p[62].y;
    const double nose_end = p[30].y;

    Frame frame(height, width);
    for (int y = 0; y < height; ++y) {
      const double gy = static_cast<double>(y) / (height - 1);
      for (int x = 0; x < width; ++x) {
        const double gx = static_cast<double>(x) / (width - 1);
        std::array<float, 3> c{};
        const float bn = 0.05f * bg_noise(gx, gy);
        for (int k = 0; k < 3; ++k) {
          c[static_cast<std::size_t>(k)] =
              static_cast<float>(id.bg_top[static_cast<std::size_t>(k)] * (1.0 - gy) +
                                 id.bg_bottom[static_cast<std::size_t>(k)] * gy) + bn;
        }

        const double u = (x - x0) / box_w;
        const double v = (y - y0) / box_h;
        const double face_r2 = ellipse_r2(u, v, 0.5, 0.52, 0.46, 0.46);
        if (face_r2 <= 1.0) {
          const float shade = static_cast<float>(1.0 - 0.25 * face_r2) + 0.06f * skin_noise(u, v);
          for (int k = 0; k < 3; ++k) c[static_cast<std::size_t>(k)] = id.skin[static_cast<std::size_t>(k)] * shade;

          if (v < 0.12) c = id.hair;
          if (brow_distance(u, v, 17) < 0.018 || brow_distance(u, v, 22) < 0.018) c = id.hair;
          for (const double ex : {left_x, right_x}) {
            if (ellipse_r2(u, v, ex, eye_y, 0.08, 0.035) <= 1.0) {
              c = {0.92f, 0.92f, 0.9f};
              if (ellipse_r2(u, v, ex, eye_y, 0.028, 0.028) <= 1.0) c = id.iris;
              if (ellipse_r2(u, v, ex, eye_y, 0.012, 0.012) <= 1.0) c = {0.03f, 0.03f, 0.03f};
            }
          }
          if (v > 0.35 && v < nose_end + 0.06) {
            const double half = 0.015 + 0.07 * (v - 0.35) / (nose_end + 0.06 - 0.35);
            if (std::abs(u - 0.5) < half) {
              const float dark = static_cast<float>(0.85 + 0.1 * std::abs(u - 0.5) / half);
              for (float& ch : c) ch *= dark;
            }
          }
          if (ellipse_r2(u, v, 0.5, 0.78, mouth_rx, outer_ry) <= 1.0) {
            c = id.lips;
            if (ellipse_r2(u, v, 0.5, 0.78, mouth_rx * 0.6, inner_ry) <= 1.0) c = {0.15f, 0.04f, 0.05f};
          }
        }
        for (int k = 0; k < 3; ++k) frame.at(y, x, k) = std::clamp(c[static_cast<std::size_t>(k)], 0.0f, 1.0f);
      }
    }
    clip.frames.push_back(std::move(frame));
    clip.landmarks.push_back(lm);
  }
  return clip;
}

}  // namespace dvsb
