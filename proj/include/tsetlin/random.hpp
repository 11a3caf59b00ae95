#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

#include <absl/random/internal/pcg_engine.h>

namespace tsetlin {

// splitmix64 finalizer; used to derive independent substream seeds.
constexpr std::uint64_t mix_seed(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  return mix_seed(mix_seed(seed) ^ mix_seed(stream + 0x632be59bd9b4e019ULL));
}

// The single random source threaded through construction and training.
// Draw order is part of the reproducibility contract: callers consume it
// in a fixed clause-major, literal-minor order.
class Rng;

/// Gaps between successes of a Bernoulli(p) sequence. Skipping ahead by a
/// geometric gap is equivalent in distribution to one draw per trial.
class GeometricSkipper {
 public:
  static constexpr std::uint64_t never = std::numeric_limits<std::uint64_t>::max();

  explicit GeometricSkipper(double p)
      : p_(p), inv_log_q_(p > 0.0 && p < 1.0 ? 1.0 / std::log1p(-p) : 0.0) {}

  template <class R>
  std::uint64_t next(R& rng) const {
    if (p_ >= 1.0) return 0;
    if (p_ <= 0.0) return never;
    const double u = 1.0 - rng.uniform();  // (0, 1]
    const double gap = std::floor(std::log(u) * inv_log_q_);
    return gap >= 0x1.0p63 ? never : static_cast<std::uint64_t>(gap);
  }

 private:
  double p_;
  double inv_log_q_;
};

class Rng {
 public:
  // PCG64 (XSL-RR 128/64); the output sequence is fixed by the algorithm.
  using engine_type = absl::random_internal::pcg64_2018_engine;
  using result_type = engine_type::result_type;

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static constexpr result_type min() { return engine_type::min(); }
  static constexpr result_type max() { return engine_type::max(); }
  result_type operator()() { return engine_(); }

  // Uniform in [0, 1) with 53 bits of resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return uniform() < p;
  }

  // Uniform integer in [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n) {
    // Lemire's multiply-shift with rejection, fixed across platforms.
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const unsigned __int128 product = static_cast<unsigned __int128>(engine_()) * n;
      if (static_cast<std::uint64_t>(product) >= threshold) {
        return static_cast<std::uint64_t>(product >> 64);
      }
    }
  }

  engine_type& engine() { return engine_; }

 private:
  engine_type engine_;
};

}  // namespace tsetlin
