#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace dvsb {

// Mixes a base seed with a stream tag so independent streams never overlap.
// Every random stream in the library is derived this way, which is what makes
// output independent of worker count and scheduling.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag) noexcept;
std::uint64_t derive_seed(std::uint64_t base, std::string_view tag) noexcept;

// Deterministic random source. The engine is std::mt19937_64 (bit-exact by
// the standard); the distributions are implemented here because the standard
// library's distributions are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double low, double high) { return low + (high - low) * uniform(); }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  bool bernoulli(double p) { return uniform() < p; }

  // Standard normal via Box-Muller; caches the second variate.
  double normal();

 private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace dvsb
