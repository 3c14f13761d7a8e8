#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace dvsb {

// Interleaved, row-major float image with a compile-time channel count.
// Frames are H x W x 3 RGB in [0, 1]; masks are H x W x 1 in [0, 1].
template <int Channels>
class Image {
 public:
  static_assert(Channels > 0);

  Image() = default;
  Image(int height, int width, float fill = 0.0f);

  static constexpr int channels() noexcept { return Channels; }
  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(height_) * static_cast<std::size_t>(width_);
  }
  bool empty() const noexcept { return data_.empty(); }
  template <int C>
  bool same_shape(const Image<C>& other) const noexcept {
    return height_ == other.height() && width_ == other.width();
  }

  float& at(int y, int x, int c = 0) noexcept { return data_[index(y, x, c)]; }
  float at(int y, int x, int c = 0) const noexcept { return data_[index(y, x, c)]; }

  // Clamp-to-edge read.
  float clamped(int y, int x, int c = 0) const noexcept {
    return at(y < 0 ? 0 : (y >= height_ ? height_ - 1 : y), x < 0 ? 0 : (x >= width_ ? width_ - 1 : x), c);
  }

  std::span<float> values() noexcept { return data_; }
  std::span<const float> values() const noexcept { return data_; }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t index(int y, int x, int c) const noexcept {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
            static_cast<std::size_t>(x)) *
               Channels +
           static_cast<std::size_t>(c);
  }

  int height_ = 0;
  int width_ = 0;
  std::vector<float> data_;
};

using Frame = Image<3>;
using Mask = Image<1>;

struct PixelRect {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;  // exclusive
  int y1 = 0;  // exclusive

  bool empty() const noexcept { return x1 <= x0 || y1 <= y0; }
};

// Kernel radius used everywhere a Gaussian is discretized: size 2*ceil(2 sigma)+1.
int gaussian_radius(double sigma) noexcept;

// Normalized 1-D Gaussian taps, length 2*radius+1.
std::vector<float> gaussian_kernel(double sigma, int radius);

// Separable Gaussian blur with clamp-to-edge borders.
template <int C>
Image<C> gaussian_blur(const Image<C>& image, double sigma);

// Pixels inside `roi` get exactly the full-blur value; pixels outside are
// copied from the input.
template <int C>
Image<C> gaussian_blur_roi(const Image<C>& image, double sigma, PixelRect roi);

// Bilinear sample at continuous pixel coordinates (pixel centers at integers),
// clamp-to-edge outside the image.
template <int C>
inline float sample_bilinear(const Image<C>& image, double y, double x, int c) noexcept {
  const double fy = std::floor(y);
  const double fx = std::floor(x);
  const int y0 = static_cast<int>(fy);
  const int x0 = static_cast<int>(fx);
  const float ay = static_cast<float>(y - fy);
  const float ax = static_cast<float>(x - fx);
  float v00, v01, v10, v11;
  if (y0 >= 0 && x0 >= 0 && y0 + 1 < image.height() && x0 + 1 < image.width()) {
    v00 = image.at(y0, x0, c);
    v01 = image.at(y0, x0 + 1, c);
    v10 = image.at(y0 + 1, x0, c);
    v11 = image.at(y0 + 1, x0 + 1, c);
  } else {
    v00 = image.clamped(y0, x0, c);
    v01 = image.clamped(y0, x0 + 1, c);
    v10 = image.clamped(y0 + 1, x0, c);
    v11 = image.clamped(y0 + 1, x0 + 1, c);
  }
  // Lerp form keeps constant neighbourhoods exact.
  const float top = v00 + ax * (v01 - v00);
  const float bottom = v10 + ax * (v11 - v10);
  return top + ay * (bottom - top);
}

// Bilinear resize with half-pixel-center alignment.
template <int C>
Image<C> resize_bilinear(const Image<C>& image, int height, int width);

// Bounding rectangle of pixels with any channel above `threshold`.
template <int C>
PixelRect support_rect(const Image<C>& image, float threshold = 0.0f) noexcept;

}  // namespace dvsb
