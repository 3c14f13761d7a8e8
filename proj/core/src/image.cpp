#include "dvsb/image.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "dvsb/error.hpp"

namespace dvsb {

template <int C>
Image<C>::Image(int height, int width, float fill) : height_(height), width_(width) {
  if (height <= 0 || width <= 0) {
    throw InputError("image dimensions must be positive, got " + std::to_string(height) + "x" +
                     std::to_string(width));
  }
  data_.assign(pixel_count() * C, fill);
}


int gaussian_radius(double sigma) noexcept {
  return std::max(0, static_cast<int>(std::ceil(2.0 * sigma)));
}

std::vector<float> gaussian_kernel(double sigma, int radius) {
  if (!(sigma > 0.0)) throw InputError("gaussian sigma must be positive");
  std::vector<double> taps(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double w = std::exp(-0.5 * (i * i) / (sigma * sigma));
    taps[static_cast<std::size_t>(i + radius)] = w;
    sum += w;
  }
  std::vector<float> kernel(taps.size());
  for (std::size_t i = 0; i < taps.size(); ++i) kernel[i] = static_cast<float>(taps[i] / sum);
  return kernel;
}

template <int C>
Image<C> gaussian_blur_roi(const Image<C>& image, double sigma, PixelRect roi) {
  if (image.empty()) return image;
  roi.x0 = std::max(roi.x0, 0);
  roi.y0 = std::max(roi.y0, 0);
  roi.x1 = std::min(roi.x1, image.width());
  roi.y1 = std::min(roi.y1, image.height());
  if (roi.empty()) return image;

  const int radius = gaussian_radius(sigma);
  const std::vector<float> kernel = gaussian_kernel(sigma, radius);
  const int h = image.height();
  const int w = image.width();

  // The horizontal pass must cover every row the vertical pass reads.
  const int ty0 = std::max(0, roi.y0 - radius);
  const int ty1 = std::min(h, roi.y1 + radius);

  Image<C> tmp = image;
  std::array<float, C> acc{};
  for (int y = ty0; y < ty1; ++y) {
    for (int x = roi.x0; x < roi.x1; ++x) {
      acc.fill(0.0f);
      for (int k = -radius; k <= radius; ++k) {
        const int sx = std::clamp(x + k, 0, w - 1);
        const float wk = kernel[static_cast<std::size_t>(k + radius)];
        for (int c = 0; c < C; ++c) acc[c] += wk * image.at(y, sx, c);
      }
      for (int c = 0; c < C; ++c) tmp.at(y, x, c) = acc[c];
    }
  }

  Image<C> out = image;
  for (int y = roi.y0; y < roi.y1; ++y) {
    for (int x = roi.x0; x < roi.x1; ++x) {
      acc.fill(0.0f);
      for (int k = -radius; k <= radius; ++k) {
        const int sy = std::clamp(y + k, 0, h - 1);
        const float wk = kernel[static_cast<std::size_t>(k + radius)];
        for (int c = 0; c < C; ++c) acc[c] += wk * tmp.at(sy, x, c);
      }
      for (int c = 0; c < C; ++c) out.at(y, x, c) = acc[c];
    }
  }
  return out;
}

template <int C>
Image<C> gaussian_blur(const Image<C>& image, double sigma) {
  return gaussian_blur_roi(image, sigma, PixelRect{0, 0, image.width(), image.height()});
}

template <int C>
Image<C> resize_bilinear(const Image<C>& image, int height, int width) {
  if (height <= 0 || width <= 0) {
    throw InputError("resize target must be at least 1x1");
  }
  Image<C> out(height, width);
  const double sy = static_cast<double>(image.height()) / height;
  const double sx = static_cast<double>(image.width()) / width;
  for (int y = 0; y < height; ++y) {
    const double src_y = (y + 0.5) * sy - 0.5;
    for (int x = 0; x < width; ++x) {
      const double src_x = (x + 0.5) * sx - 0.5;
      for (int c = 0; c < C; ++c) out.at(y, x, c) = sample_bilinear(image, src_y, src_x, c);
    }
  }
  return out;
}

template <int C>
PixelRect support_rect(const Image<C>& image, float threshold) noexcept {
  PixelRect r{image.width(), image.height(), 0, 0};
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      for (int c = 0; c < C; ++c) {
        if (image.at(y, x, c) > threshold) {
          r.x0 = std::min(r.x0, x);
          r.y0 = std::min(r.y0, y);
          r.x1 = std::max(r.x1, x + 1);
          r.y1 = std::max(r.y1, y + 1);
          break;
        }
      }
    }
  }
  if (r.empty()) return PixelRect{};
  return r;
}

#define DVSB_INSTANTIATE_IMAGE(C)                                                      \
  template class Image<C>;                                                             \
  template Image<C> gaussian_blur(const Image<C>&, double);                            \
  template Image<C> gaussian_blur_roi(const Image<C>&, double, PixelRect);             \
  template Image<C> resize_bilinear(const Image<C>&, int, int);                        \
  template PixelRect support_rect(const Image<C>&, float) noexcept;

DVSB_INSTANTIATE_IMAGE(1)
DVSB_INSTANTIATE_IMAGE(2)
DVSB_INSTANTIATE_IMAGE(3)

#undef DVSB_INSTANTIATE_IMAGE

}  // namespace dvsb
