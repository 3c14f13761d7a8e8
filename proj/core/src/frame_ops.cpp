#include "dvsb/frame_ops.hpp"

#include <algorithm>
#include <cmath>

#include "dvsb/error.hpp"

namespace dvsb {

namespace {

float clamp01(float v) noexcept { return std::clamp(v, 0.0f, 1.0f); }

}  // namespace

double FaceBox::diagonal() const noexcept { return std::hypot(w, h); }

Hsv rgb_to_hsv(float r, float g, float b) noexcept {
  const double rd = r, gd = g, bd = b;
  const double max = std::max({rd, gd, bd});
  const double min = std::min({rd, gd, bd});
  const double delta = max - min;
  Hsv out;
  out.v = static_cast<float>(max);
  out.s = max > 0.0 ? static_cast<float>(delta / max) : 0.0f;
  if (delta <= 0.0) return out;
  double h;
  if (max == rd) {
    h = (gd - bd) / delta;
    if (h < 0.0) h += 6.0;
  } else if (max == gd) {
    h = (bd - rd) / delta + 2.0;
  } else {
    h = (rd - gd) / delta + 4.0;
  }
  h /= 6.0;
  if (h >= 1.0) h -= 1.0;
  out.h = static_cast<float>(h);
  return out;
}

void hsv_to_rgb(Hsv hsv, float& r, float& g, float& b) noexcept {
  const double v = hsv.v;
  const double s = hsv.s;
  if (s <= 0.0) {
    r = g = b = hsv.v;
    return;
  }
  double h6 = static_cast<double>(hsv.h) * 6.0;
  h6 -= 6.0 * std::floor(h6 / 6.0);
  const int sector = std::min(5, static_cast<int>(std::floor(h6)));
  const double f = h6 - sector;
  const double p = v * (1.0 - s);
  const double q = v * (1.0 - s * f);
  const double t = v * (1.0 - s * (1.0 - f));
  double rd, gd, bd;
  switch (sector) {
    case 0: rd = v, gd = t, bd = p; break;
    case 1: rd = q, gd = v, bd = p; break;
    case 2: rd = p, gd = v, bd = t; break;
    case 3: rd = p, gd = q, bd = v; break;
    case 4: rd = t, gd = p, bd = v; break;
    default: rd = v, gd = p, bd = q; break;
  }
  r = static_cast<float>(rd);
  g = static_cast<float>(gd);
  b = static_cast<float>(bd);
}

Frame apply_color(const Frame& frame, const ColorParams& p) {
  Frame out = frame;
  auto px = out.values();

  if (p.rgb_offset[0] != 0.0 || p.rgb_offset[1] != 0.0 || p.rgb_offset[2] != 0.0) {
    for (std::size_t i = 0; i < px.size(); ++i) {
      px[i] = clamp01(px[i] + static_cast<float>(p.rgb_offset[i % 3]));
    }
  }

  if (p.hue_offset != 0.0 || p.sat_scale != 1.0 || p.val_scale != 1.0) {
    for (std::size_t i = 0; i < px.size(); i += 3) {
      Hsv hsv = rgb_to_hsv(px[i], px[i + 1], px[i + 2]);
      double h = static_cast<double>(hsv.h) + p.hue_offset;
      h -= std::floor(h);
      hsv.h = static_cast<float>(h);
      if (hsv.h >= 1.0f) hsv.h = 0.0f;
      hsv.s = clamp01(static_cast<float>(hsv.s * p.sat_scale));
      hsv.v = clamp01(static_cast<float>(hsv.v * p.val_scale));
      hsv_to_rgb(hsv, px[i], px[i + 1], px[i + 2]);
    }
  }

  if (p.contrast_scale != 1.0) {
    const auto c = static_cast<float>(p.contrast_scale);
    for (float& v : px) v = (v - 0.5f) * c + 0.5f;
  }

  if (p.brightness_offset != 0.0) {
    const auto b = static_cast<float>(p.brightness_offset);
    for (float& v : px) v += b;
  }

  for (float& v : px) v = clamp01(v);
  return out;
}

Frame apply_quality(const Frame& frame, const QualityParams& p) {
  if (p.mode == QualityMode::kDownscale) {
    const int h = static_cast<int>(std::floor(p.strength * frame.height()));
    const int w = static_cast<int>(std::floor(p.strength * frame.width()));
    if (h < 1 || w < 1) {
      throw InputError("downscale factor " + std::to_string(p.strength) + " maps a " +
                       std::to_string(frame.height()) + "x" + std::to_string(frame.width()) +
                       " frame below one pixel");
    }
    if (h == frame.height() && w == frame.width()) return frame;
    return resize_bilinear(resize_bilinear(frame, h, w), frame.height(), frame.width());
  }

  if (p.strength == 0.0) return frame;
  const Frame blurred = gaussian_blur(frame, 1.0);
  Frame out = frame;
  const auto amount = static_cast<float>(p.strength);
  auto dst = out.values();
  auto src = frame.values();
  auto low = blurred.values();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    dst[i] = clamp01(src[i] + amount * (src[i] - low[i]));
  }
  return out;
}

template <int C>
Image<C> apply_dislocation(const Image<C>& image, const DislocationParams& p, const FaceBox& box) {
  if (p.scale_x == 1.0 && p.scale_y == 1.0 && p.translate_x == 0.0 && p.translate_y == 0.0) {
    return image;
  }
  if (!(p.scale_x > 0.0) || !(p.scale_y > 0.0)) {
    throw InputError("dislocation scale must be positive");
  }
  const double cx = box.center_x();
  const double cy = box.center_y();
  const double tx = p.translate_x * box.w;
  const double ty = p.translate_y * box.h;

  Image<C> out(image.height(), image.width());
  for (int y = 0; y < image.height(); ++y) {
    const double sy = cy + (y - cy - ty) / p.scale_y;
    for (int x = 0; x < image.width(); ++x) {
      const double sx = cx + (x - cx - tx) / p.scale_x;
      for (int c = 0; c < C; ++c) out.at(y, x, c) = sample_bilinear(image, sy, sx, c);
    }
  }
  return out;
}

template Image<1> apply_dislocation(const Image<1>&, const DislocationParams&, const FaceBox&);
template Image<3> apply_dislocation(const Image<3>&, const DislocationParams&, const FaceBox&);

}  // namespace dvsb
