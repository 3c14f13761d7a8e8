#pragma once

#include <span>
#include <vector>

#include "dvsb/image.hpp"

namespace dvsb {

using Embedding = std::vector<double>;

struct EmbeddingBatch {
  std::vector<Embedding> vectors;  // 2N vectors of equal dimension
  std::vector<int> pair_map;       // partner index, 0-based
  double tau = 0.5;

  int pair_count() const noexcept { return static_cast<int>(vectors.size()) / 2; }

  // Throws ConfigError for tau <= 0 and InputError for a malformed batch
  // (odd count, ragged or zero vectors, pair map not a fixed-point-free
  // involution).
  void validate() const;
};

// NT-Xent averaged over all 2N ordered anchor/positive pairs. Similarities are
// cosine, so vectors need not be pre-normalized.
double nt_xent_loss(const EmbeddingBatch& batch);

// Gradient of nt_xent_loss with respect to the (un-normalized) input vectors.
std::vector<Embedding> nt_xent_grad(const EmbeddingBatch& batch);

// Handcrafted clip descriptor: per-frame 8x8 grayscale block means,
// per-frame 8x8 block high-pass residual energy, and per-block statistics of
// frame-to-frame differences. Each block is normalized separately before the
// unit-norm concatenation.
Embedding toy_embed(std::span<const Frame> frames);

struct MatchResult {
  double accuracy = 0.0;
  // True when some anchor's nearest-neighbour search hit an exact tie
  // (resolved toward the lowest index).
  bool ties = false;
};

// Fraction of anchors whose cosine nearest neighbour (excluding itself) is
// their partner. Chance level is 1 / (2N - 1).
MatchResult pair_match_accuracy(std::span<const Embedding> vectors, std::span<const int> pair_map);

}  // namespace dvsb
