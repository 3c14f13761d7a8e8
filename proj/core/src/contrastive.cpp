#include "dvsb/contrastive.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "dvsb/error.hpp"

namespace dvsb {

namespace {

double dot(const Embedding& a, const Embedding& b) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const Embedding& v) noexcept { return std::sqrt(dot(v, v)); }

std::vector<Embedding> unit_vectors(const std::vector<Embedding>& vectors) {
  std::vector<Embedding> out = vectors;
  for (Embedding& v : out) {
    const double n = norm(v);
    for (double& x : v) x /= n;
  }
  return out;
}

// Row-wise softmax of similarities / tau over k != i; the diagonal is 0.
std::vector<std::vector<double>> similarity_softmax(const std::vector<Embedding>& unit, double tau,
                                                    std::vector<double>* log_denominators) {
  const std::size_t n = unit.size();
  std::vector<std::vector<double>> p(n, std::vector<double>(n, 0.0));
  if (log_denominators) log_denominators->assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double peak = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
      if (k == i) continue;
      p[i][k] = dot(unit[i], unit[k]) / tau;
      peak = std::max(peak, p[i][k]);
    }
    double total = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == i) continue;
      total += std::exp(p[i][k] - peak);
    }
    if (log_denominators) (*log_denominators)[i] = peak + std::log(total);
    for (std::size_t k = 0; k < n; ++k) {
      if (k == i) continue;
      p[i][k] = std::exp(p[i][k] - peak) / total;
    }
  }
  return p;
}

// Grayscale block statistics on an 8x8 grid.
constexpr int kGrid = 8;

std::vector<float> grayscale(const Frame& f) {
  std::vector<float> g(f.pixel_count());
  std::size_t i = 0;
  for (int y = 0; y < f.height(); ++y) {
    for (int x = 0; x < f.width(); ++x) {
      g[i++] = 0.299f * f.at(y, x, 0) + 0.587f * f.at(y, x, 1) + 0.114f * f.at(y, x, 2);
    }
  }
  return g;
}

// Difference from the 3x3 box mean (clamp-to-edge).
std::vector<float> high_pass(const std::vector<float>& g, int h, int w) {
  std::vector<float> r(g.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      float s = 0.0f;
      for (int dy = -1; dy <= 1; ++dy) {
        const int yy = std::clamp(y + dy, 0, h - 1);
        for (int dx = -1; dx <= 1; ++dx) {
          const int xx = std::clamp(x + dx, 0, w - 1);
          s += g[static_cast<std::size_t>(yy * w + xx)];
        }
      }
      const auto i = static_cast<std::size_t>(y * w + x);
      r[i] = g[i] - s / 9.0f;
    }
  }
  return r;
}

template <typename Fn>
std::vector<double> block_means(int h, int w, Fn&& value) {
  std::vector<double> out(kGrid * kGrid, 0.0);
  for (int by = 0; by < kGrid; ++by) {
    const int y0 = by * h / kGrid;
    const int y1 = std::max(y0 + 1, (by + 1) * h / kGrid);
    for (int bx = 0; bx < kGrid; ++bx) {
      const int x0 = bx * w / kGrid;
      const int x1 = std::max(x0 + 1, (bx + 1) * w / kGrid);
      double s = 0.0;
      int count = 0;
      for (int y = y0; y < std::min(y1, h); ++y) {
        for (int x = x0; x < std::min(x1, w); ++x) {
          s += value(static_cast<std::size_t>(y * w + x));
          ++count;
        }
      }
      out[static_cast<std::size_t>(by * kGrid + bx)] = count > 0 ? s / count : 0.0;
    }
  }
  return out;
}

void append_normalized(Embedding& out, std::vector<double> block) {
  const double n = std::sqrt(std::inner_product(block.begin(), block.end(), block.begin(), 0.0));
  if (n > 0.0) {
    for (double& v : block) v /= n;
  }
  out.insert(out.end(), block.begin(), block.end());
}

}  // namespace

void EmbeddingBatch::validate() const {
  if (!(tau > 0.0)) throw ConfigError("NT-Xent temperature must be positive");
  if (vectors.size() < 2 || vectors.size() % 2 != 0) {
    throw InputError("embedding batch needs 2N >= 2 vectors, got " + std::to_string(vectors.size()));
  }
  const std::size_t dim = vectors.front().size();
  if (dim == 0) throw InputError("embedding vectors must be non-empty");
  for (const Embedding& v : vectors) {
    if (v.size() != dim) throw InputError("embedding vectors differ in dimension");
    if (!(norm(v) > 0.0)) throw InputError("embedding vector has zero norm");
  }
  if (pair_map.size() != vectors.size()) throw InputError("pair map size does not match the batch");
  const int n = static_cast<int>(vectors.size());
  for (int i = 0; i < n; ++i) {
    const int j = pair_map[static_cast<std::size_t>(i)];
    if (j < 0 || j >= n || j == i || pair_map[static_cast<std::size_t>(j)] != i) {
      throw InputError("pair map is not a fixed-point-free involution at index " + std::to_string(i));
    }
  }
}

double nt_xent_loss(const EmbeddingBatch& batch) {
  batch.validate();
  const std::vector<Embedding> unit = unit_vectors(batch.vectors);
  std::vector<double> log_den;
  similarity_softmax(unit, batch.tau, &log_den);
  double total = 0.0;
  for (std::size_t i = 0; i < unit.size(); ++i) {
    const auto j = static_cast<std::size_t>(batch.pair_map[i]);
    total += log_den[i] - dot(unit[i], unit[j]) / batch.tau;
  }
  return total / static_cast<double>(unit.size());
}

std::vector<Embedding> nt_xent_grad(const EmbeddingBatch& batch) {
  batch.validate();
  const std::size_t n = batch.vectors.size();
  const std::size_t dim = batch.vectors.front().size();
  const std::vector<Embedding> unit = unit_vectors(batch.vectors);
  std::vector<std::vector<double>> coef = similarity_softmax(unit, batch.tau, nullptr);

  // coef[i][k] = dL / dsim(i, k) as seen from anchor i.
  const double scale = 1.0 / (batch.tau * static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    coef[i][static_cast<std::size_t>(batch.pair_map[i])] -= 1.0;
    for (double& c : coef[i]) c *= scale;
  }

  std::vector<Embedding> grad(n, Embedding(dim, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    Embedding g_unit(dim, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      if (k == i) continue;
      const double c = coef[i][k] + coef[k][i];
      for (std::size_t d = 0; d < dim; ++d) g_unit[d] += c * unit[k][d];
    }
    // Project through the normalization z -> z / |z|.
    const double radial = dot(g_unit, unit[i]);
    const double inv_norm = 1.0 / norm(batch.vectors[i]);
    for (std::size_t d = 0; d < dim; ++d) {
      grad[i][d] = (g_unit[d] - radial * unit[i][d]) * inv_norm;
    }
  }
  return grad;
}

Embedding toy_embed(std::span<const Frame> frames) {
  if (frames.empty()) throw InputError("toy_embed: empty clip");
  const int h = frames.front().height();
  const int w = frames.front().width();
  for (const Frame& f : frames) {
    if (f.height() != h || f.width() != w) throw ConsistencyError("toy_embed: frame sizes differ");
  }

  std::vector<std::vector<float>> gray;
  std::vector<std::vector<float>> residual;
  gray.reserve(frames.size());
  residual.reserve(frames.size());
  for (const Frame& f : frames) {
    gray.push_back(grayscale(f));
    residual.push_back(high_pass(gray.back(), h, w));
  }

  Embedding out;
  std::vector<double> means;
  std::vector<double> energy;
  for (std::size_t t = 0; t < frames.size(); ++t) {
    const auto& g = gray[t];
    const auto& r = residual[t];
    const auto m = block_means(h, w, [&](std::size_t i) { return static_cast<double>(g[i]); });
    const auto e = block_means(h, w, [&](std::size_t i) { return static_cast<double>(r[i]) * r[i]; });
    means.insert(means.end(), m.begin(), m.end());
    energy.insert(energy.end(), e.begin(), e.end());
  }

  // Per block: mean absolute frame difference of the image and of the
  // high-pass residual, averaged over time.
  std::vector<double> diff_image(kGrid * kGrid, 0.0);
  std::vector<double> diff_residual(kGrid * kGrid, 0.0);
  for (std::size_t t = 1; t < frames.size(); ++t) {
    const auto& g0 = gray[t - 1];
    const auto& g1 = gray[t];
    const auto& r0 = residual[t - 1];
    const auto& r1 = residual[t];
    const auto di = block_means(h, w, [&](std::size_t i) { return std::abs(static_cast<double>(g1[i]) - g0[i]); });
    const auto dr = block_means(h, w, [&](std::size_t i) { return std::abs(static_cast<double>(r1[i]) - r0[i]); });
    for (std::size_t b = 0; b < di.size(); ++b) {
      diff_image[b] += di[b];
      diff_residual[b] += dr[b];
    }
  }

  append_normalized(out, std::move(means));
  append_normalized(out, std::move(energy));
  append_normalized(out, std::move(diff_image));
  append_normalized(out, std::move(diff_residual));

  const double n = norm(out);
  if (n > 0.0) {
    for (double& v : out) v /= n;
  } else {
    // All-black clip: fall back to a fixed unit vector.
    std::fill(out.begin(), out.end(), 1.0 / std::sqrt(static_cast<double>(out.size())));
  }
  return out;
}

MatchResult pair_match_accuracy(std::span<const Embedding> vectors, std::span<const int> pair_map) {
  const std::size_t n = vectors.size();
  if (n < 4 || pair_map.size() != n) {
    throw InputError("pair_match_accuracy needs at least 2 pairs and a matching pair map");
  }
  std::vector<double> norms(n);
  for (std::size_t i = 0; i < n; ++i) {
    norms[i] = norm(vectors[i]);
    if (!(norms[i] > 0.0)) throw InputError("pair_match_accuracy: zero vector");
  }

  MatchResult result;
  int hits = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double best = -std::numeric_limits<double>::infinity();
    std::size_t best_k = n;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == i) continue;
      const double s = dot(vectors[i], vectors[k]) / (norms[i] * norms[k]);
      if (s > best) {
        best = s;
        best_k = k;
      } else if (s == best) {
        result.ties = true;
      }
    }
    if (static_cast<int>(best_k) == pair_map[i]) ++hits;
  }
  result.accuracy = static_cast<double>(hits) / static_cast<double>(n);
  return result;
}

}  // namespace dvsb
