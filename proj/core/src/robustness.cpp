#include "dvsb/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "dvsb/error.hpp"
#include "dvsb/rng.hpp"

namespace dvsb {

namespace {

constexpr std::array<std::string_view, kCorruptionKindCount> kNames = {
    "saturation", "contrast", "blockwise", "gaussian_noise", "gaussian_blur", "pixelation",
    "compression"};

float luma(const Frame& f, int y, int x) noexcept {
  return 0.299f * f.at(y, x, 0) + 0.587f * f.at(y, x, 1) + 0.114f * f.at(y, x, 2);
}

void clamp_unit(Frame& f) noexcept {
  for (float& v : f.values()) v = std::clamp(v, 0.0f, 1.0f);
}

// Chroma scaling; equivalent to scaling Cb/Cr with Y held fixed.
Frame saturate(const Frame& in, double keep) {
  Frame out = in;
  const auto k = static_cast<float>(keep);
  for (int y = 0; y < in.height(); ++y) {
    for (int x = 0; x < in.width(); ++x) {
      const float g = luma(in, y, x);
      for (int c = 0; c < 3; ++c) out.at(y, x, c) = g + k * (in.at(y, x, c) - g);
    }
  }
  clamp_unit(out);
  return out;
}

Frame scale_contrast(const Frame& in, double keep) {
  const auto values = in.values();
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) /
                      static_cast<double>(values.size());
  Frame out = in;
  for (float& v : out.values()) v = static_cast<float>(mean + keep * (v - mean));
  clamp_unit(out);
  return out;
}

// Gray squares at random positions. Block j always gets the same draw, so a
// higher count only adds blocks; earlier blocks are painted on top.
Frame blockwise(const Frame& in, int count, std::uint64_t seed) {
  Frame out = in;
  const int side = std::max(2, std::min(in.height(), in.width()) / 14);
  struct Block {
    int x, y;
    float gray;
  };
  std::vector<Block> blocks;
  Rng rng(derive_seed(seed, "blockwise"));
  for (int j = 0; j < count; ++j) {
    Block b{};
    b.x = static_cast<int>(rng.below(static_cast<std::uint64_t>(std::max(1, in.width() - side + 1))));
    b.y = static_cast<int>(rng.below(static_cast<std::uint64_t>(std::max(1, in.height() - side + 1))));
    b.gray = static_cast<float>(rng.uniform());
    blocks.push_back(b);
  }
  for (auto it = blocks.rbegin(); it != blocks.rend(); ++it) {
    for (int y = it->y; y < std::min(in.height(), it->y + side); ++y) {
      for (int x = it->x; x < std::min(in.width(), it->x + side); ++x) {
        for (int c = 0; c < 3; ++c) out.at(y, x, c) = it->gray;
      }
    }
  }
  return out;
}

Frame add_noise(const Frame& in, double sigma, std::uint64_t seed) {
  Frame out = in;
  Rng rng(derive_seed(seed, "noise"));
  for (float& v : out.values()) v = static_cast<float>(v + sigma * rng.normal());
  clamp_unit(out);
  return out;
}

// Area-average down to floor(f * dim), nearest-neighbour back up.
Frame pixelate(const Frame& in, double factor) {
  const int h = in.height();
  const int w = in.width();
  const int sh = std::max(1, static_cast<int>(std::floor(factor * h)));
  const int sw = std::max(1, static_cast<int>(std::floor(factor * w)));
  // Block sy holds exactly the pixels y with y * sh / h == sy, so the
  // nearest-neighbour upscale below paints each pixel with its own block.
  auto first = [](int i, int full, int small) { return (i * full + small - 1) / small; };
  Frame small(sh, sw);
  for (int sy = 0; sy < sh; ++sy) {
    const int y0 = first(sy, h, sh);
    const int y1 = first(sy + 1, h, sh);
    for (int sx = 0; sx < sw; ++sx) {
      const int x0 = first(sx, w, sw);
      const int x1 = first(sx + 1, w, sw);
      for (int c = 0; c < 3; ++c) {
        double s = 0.0;
        for (int y = y0; y < y1; ++y) {
          for (int x = x0; x < x1; ++x) s += in.at(y, x, c);
        }
        small.at(sy, sx, c) = static_cast<float>(s / ((y1 - y0) * (x1 - x0)));
      }
    }
  }
  Frame out(h, w);
  for (int y = 0; y < h; ++y) {
    const int sy = std::min(sh - 1, y * sh / h);
    for (int x = 0; x < w; ++x) {
      const int sx = std::min(sw - 1, x * sw / w);
      for (int c = 0; c < 3; ++c) out.at(y, x, c) = small.at(sy, sx, c);
    }
  }
  return out;
}

// Baseline JPEG tables (ITU T.81 Annex K).
constexpr std::array<int, 64> kLumaTable = {
    16, 11, 10, 16, 24,  40,  51,  61,  12, 12, 14, 19, 26,  58,  60,  55,
    14, 13, 16, 24, 40,  57,  69,  56,  14, 17, 22, 29, 51,  87,  80,  62,
    18, 22, 37, 56, 68,  109, 103, 77,  24, 35, 55, 64, 81,  104, 113, 92,
    49, 64, 78, 87, 103, 121, 120, 101, 72, 92, 95, 98, 112, 100, 103, 99};
constexpr std::array<int, 64> kChromaTable = {
    17, 18, 24, 47, 99, 99, 99, 99, 18, 21, 26, 66, 99, 99, 99, 99,
    24, 26, 56, 99, 99, 99, 99, 99, 47, 66, 99, 99, 99, 99, 99, 99,
    99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99,
    99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99};

std::array<double, 64> scaled_table(const std::array<int, 64>& base, double quality) {
  const double q = std::clamp(quality, 1.0, 100.0);
  const double scale = q < 50.0 ? 5000.0 / q : 200.0 - 2.0 * q;
  std::array<double, 64> out{};
  for (int i = 0; i < 64; ++i) {
    out[static_cast<std::size_t>(i)] =
        std::clamp(std::floor((base[static_cast<std::size_t>(i)] * scale + 50.0) / 100.0), 1.0, 255.0);
  }
  return out;
}

const std::array<std::array<double, 8>, 8>& dct8_basis() {
  static const auto basis = [] {
    std::array<std::array<double, 8>, 8> b{};
    for (int k = 0; k < 8; ++k) {
      const double a = k == 0 ? std::sqrt(1.0 / 8.0) : std::sqrt(2.0 / 8.0);
      for (int n = 0; n < 8; ++n) {
        b[static_cast<std::size_t>(k)][static_cast<std::size_t>(n)] =
            a * std::cos(std::numbers::pi * (2 * n + 1) * k / 16.0);
      }
    }
    return b;
  }();
  return basis;
}

// Quantizes one plane in place, 8x8 blocks with clamp-to-edge padding.
void quantize_plane(std::vector<double>& plane, int h, int w, const std::array<double, 64>& table) {
  const auto& b = dct8_basis();
  std::array<double, 64> block{};
  std::array<double, 64> tmp{};
  for (int by = 0; by < h; by += 8) {
    for (int bx = 0; bx < w; bx += 8) {
      for (int y = 0; y < 8; ++y) {
        for (int x = 0; x < 8; ++x) {
          const int yy = std::min(by + y, h - 1);
          const int xx = std::min(bx + x, w - 1);
          block[static_cast<std::size_t>(y * 8 + x)] = plane[static_cast<std::size_t>(yy * w + xx)];
        }
      }
      // Forward 2-D DCT.
      for (int u = 0; u < 8; ++u) {
        for (int x = 0; x < 8; ++x) {
          double s = 0.0;
          for (int y = 0; y < 8; ++y) s += b[u][y] * block[static_cast<std::size_t>(y * 8 + x)];
          tmp[static_cast<std::size_t>(u * 8 + x)] = s;
        }
      }
      for (int u = 0; u < 8; ++u) {
        for (int v = 0; v < 8; ++v) {
          double s = 0.0;
          for (int x = 0; x < 8; ++x) s += b[v][x] * tmp[static_cast<std::size_t>(u * 8 + x)];
          const double q = table[static_cast<std::size_t>(u * 8 + v)];
          block[static_cast<std::size_t>(u * 8 + v)] = std::round(s / q) * q;
        }
      }
      // Inverse.
      for (int u = 0; u < 8; ++u) {
        for (int x = 0; x < 8; ++x) {
          double s = 0.0;
          for (int v = 0; v < 8; ++v) s += b[v][x] * block[static_cast<std::size_t>(u * 8 + v)];
          tmp[static_cast<std::size_t>(u * 8 + x)] = s;
        }
      }
      for (int y = 0; y < 8 && by + y < h; ++y) {
        for (int x = 0; x < 8 && bx + x < w; ++x) {
          double s = 0.0;
          for (int u = 0; u < 8; ++u) s += b[u][y] * tmp[static_cast<std::size_t>(u * 8 + x)];
          plane[static_cast<std::size_t>((by + y) * w + bx + x)] = s;
        }
      }
    }
  }
}

// Block-DCT quantization in YCbCr (0-255 scale) with 4:2:0 chroma.
Frame compress(const Frame& in, double quality) {
  const int h = in.height();
  const int w = in.width();
  const int ch = (h + 1) / 2;
  const int cw = (w + 1) / 2;
  std::vector<double> Y(static_cast<std::size_t>(h * w));
  std::vector<double> cb_full(Y.size());
  std::vector<double> cr_full(Y.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double r = 255.0 * in.at(y, x, 0);
      const double g = 255.0 * in.at(y, x, 1);
      const double bl = 255.0 * in.at(y, x, 2);
      const auto i = static_cast<std::size_t>(y * w + x);
      Y[i] = 0.299 * r + 0.587 * g + 0.114 * bl - 128.0;
      cb_full[i] = -0.168736 * r - 0.331264 * g + 0.5 * bl;
      cr_full[i] = 0.5 * r - 0.418688 * g - 0.081312 * bl;
    }
  }
  std::vector<double> cb(static_cast<std::size_t>(ch * cw));
  std::vector<double> cr(cb.size());
  for (int y = 0; y < ch; ++y) {
    for (int x = 0; x < cw; ++x) {
      double sb = 0.0, sr = 0.0;
      int n = 0;
      for (int dy = 0; dy < 2; ++dy) {
        for (int dx = 0; dx < 2; ++dx) {
          const int yy = 2 * y + dy;
          const int xx = 2 * x + dx;
          if (yy >= h || xx >= w) continue;
          sb += cb_full[static_cast<std::size_t>(yy * w + xx)];
          sr += cr_full[static_cast<std::size_t>(yy * w + xx)];
          ++n;
        }
      }
      cb[static_cast<std::size_t>(y * cw + x)] = sb / n;
      cr[static_cast<std::size_t>(y * cw + x)] = sr / n;
    }
  }

  quantize_plane(Y, h, w, scaled_table(kLumaTable, quality));
  const auto chroma = scaled_table(kChromaTable, quality);
  quantize_plane(cb, ch, cw, chroma);
  quantize_plane(cr, ch, cw, chroma);

  Frame out(h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double yy = Y[static_cast<std::size_t>(y * w + x)] + 128.0;
      const auto ci = static_cast<std::size_t>((y / 2) * cw + x / 2);
      const double b = cb[ci];
      const double r = cr[ci];
      out.at(y, x, 0) = static_cast<float>((yy + 1.402 * r) / 255.0);
      out.at(y, x, 1) = static_cast<float>((yy - 0.344136 * b - 0.714136 * r) / 255.0);
      out.at(y, x, 2) = static_cast<float>((yy + 1.772 * b) / 255.0);
    }
  }
  clamp_unit(out);
  return out;
}

void check_row(std::string_view name, const SeverityTables::Row& row, bool increasing, double low,
               double high) {
  for (int i = 0; i < kSeverityLevels; ++i) {
    const double v = row[static_cast<std::size_t>(i)];
    if (!std::isfinite(v) || v < low || v > high) {
      throw ConfigError("corruption severity " + std::string(name) + "[" + std::to_string(i + 1) +
                        "] = " + std::to_string(v) + " is out of range");
    }
    if (i == 0) continue;
    const double prev = row[static_cast<std::size_t>(i - 1)];
    if (increasing ? !(v > prev) : !(v < prev)) {
      throw ConfigError("corruption severity " + std::string(name) +
                        " must be strictly monotone in damage");
    }
  }
}

}  // namespace

std::string_view to_string(CorruptionKind kind) noexcept {
  return kNames[static_cast<std::size_t>(kind)];
}

CorruptionKind parse_corruption_kind(std::string_view text) {
  for (int i = 0; i < kCorruptionKindCount; ++i) {
    if (kNames[static_cast<std::size_t>(i)] == text) return static_cast<CorruptionKind>(i);
  }
  throw ConfigError("unknown corruption kind: " + std::string(text));
}

std::array<CorruptionKind, kCorruptionKindCount> all_corruption_kinds() noexcept {
  std::array<CorruptionKind, kCorruptionKindCount> out{};
  for (int i = 0; i < kCorruptionKindCount; ++i) out[static_cast<std::size_t>(i)] = static_cast<CorruptionKind>(i);
  return out;
}

const SeverityTables::Row& SeverityTables::row(CorruptionKind kind) const noexcept {
  return const_cast<SeverityTables*>(this)->row(kind);
}

SeverityTables::Row& SeverityTables::row(CorruptionKind kind) noexcept {
  switch (kind) {
    case CorruptionKind::kSaturation: return saturation;
    case CorruptionKind::kContrast: return contrast;
    case CorruptionKind::kBlockwise: return blockwise;
    case CorruptionKind::kGaussianNoise: return gaussian_noise;
    case CorruptionKind::kGaussianBlur: return gaussian_blur;
    case CorruptionKind::kPixelation: return pixelation;
    case CorruptionKind::kCompression: return compression;
  }
  return gaussian_noise;
}

void SeverityTables::validate() const {
  check_row("saturation", saturation, false, 0.0, 1.0);
  check_row("contrast", contrast, false, 0.0, 1.0);
  check_row("blockwise", blockwise, true, 1.0, 10000.0);
  check_row("gaussian_noise", gaussian_noise, true, 0.0, 1.0);
  check_row("gaussian_blur", gaussian_blur, true, 1e-6, 100.0);
  check_row("pixelation", pixelation, false, 1e-6, 1.0);
  check_row("compression", compression, false, 1.0, 100.0);
}

nlohmann::json severity_tables_to_json(const SeverityTables& tables) {
  nlohmann::json j = nlohmann::json::object();
  for (CorruptionKind kind : all_corruption_kinds()) {
    const auto& row = tables.row(kind);
    j[std::string(to_string(kind))] = std::vector<double>(row.begin(), row.end());
  }
  return j;
}

SeverityTables severity_tables_from_json(const nlohmann::json& j, SeverityTables base) {
  if (!j.is_object()) throw ConfigError("corruption severity must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    auto& row = base.row(parse_corruption_kind(key));
    if (!value.is_array() || value.size() != kSeverityLevels) {
      throw ConfigError("corruption severity " + key + " must list 5 numbers");
    }
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (!value[i].is_number()) throw ConfigError("corruption severity " + key + " must be numeric");
      row[i] = value[i].get<double>();
    }
  }
  base.validate();
  return base;
}

Frame corrupt_frame(const Frame& frame, const CorruptionSpec& spec, std::uint64_t seed,
                    const SeverityTables& tables) {
  if (spec.severity < 1 || spec.severity > kSeverityLevels) {
    throw ConfigError("corruption severity must be in 1..5, got " + std::to_string(spec.severity));
  }
  const double p = tables.row(spec.kind)[static_cast<std::size_t>(spec.severity - 1)];
  switch (spec.kind) {
    case CorruptionKind::kSaturation: return saturate(frame, p);
    case CorruptionKind::kContrast: return scale_contrast(frame, p);
    case CorruptionKind::kBlockwise: return blockwise(frame, static_cast<int>(std::lround(p)), seed);
    case CorruptionKind::kGaussianNoise: return add_noise(frame, p, seed);
    case CorruptionKind::kGaussianBlur: return gaussian_blur(frame, p);
    case CorruptionKind::kPixelation: return pixelate(frame, p);
    case CorruptionKind::kCompression: return compress(frame, p);
  }
  return frame;
}

std::vector<Frame> corrupt(std::span<const Frame> clip, const CorruptionSpec& spec,
                           std::uint64_t seed, const SeverityTables& tables) {
  std::vector<Frame> out;
  out.reserve(clip.size());
  for (std::size_t i = 0; i < clip.size(); ++i) {
    out.push_back(corrupt_frame(clip[i], spec, derive_seed(seed, static_cast<std::uint64_t>(i)), tables));
  }
  return out;
}

double psnr(const Frame& a, const Frame& b) {
  if (!a.same_shape(b) || a.empty()) throw InputError("psnr: frames differ in shape or are empty");
  const auto va = a.values();
  const auto vb = b.values();
  double se = 0.0;
  for (std::size_t i = 0; i < va.size(); ++i) {
    const double d = static_cast<double>(va[i]) - vb[i];
    se += d * d;
  }
  if (se == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(static_cast<double>(va.size()) / se);
}

double roc_auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw InputError("roc_auc: scores and labels differ in length");
  std::size_t positives = 0;
  for (int l : labels) {
    if (l != 0 && l != 1) throw InputError("roc_auc: labels must be 0 or 1");
    positives += static_cast<std::size_t>(l);
  }
  const std::size_t negatives = labels.size() - positives;
  if (positives == 0 || negatives == 0) {
    throw UndefinedMetric("roc_auc needs both classes, got " + std::to_string(positives) +
                          " positive and " + std::to_string(negatives) + " negative");
  }
  for (double s : scores) {
    if (std::isnan(s)) throw InputError("roc_auc: NaN score");
  }

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double positive_rank_sum = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double midrank = (static_cast<double>(i) + static_cast<double>(j) + 1.0) / 2.0;
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] == 1) positive_rank_sum += midrank;
    }
    i = j;
  }
  const double np = static_cast<double>(positives);
  return (positive_rank_sum - np * (np + 1.0) / 2.0) / (np * static_cast<double>(negatives));
}

}  // namespace dvsb
