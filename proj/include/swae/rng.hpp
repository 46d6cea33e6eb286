#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace swae {

/// Seeded pseudo-random source: std::mt19937_64 driving the standard
/// library's uniform and normal distributions.
///
/// Two instances built from the same seed produce the same stream. The
/// stream is stable within one build; across standard libraries the normal
/// draws may differ because std::normal_distribution is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform draw in [0, 1).
  double uniform() { return unit_(engine_); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double standard_normal() { return normal_(engine_); }
  /// Uniform integer in [0, n). n must be positive.
  std::size_t uniform_index(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
  }
  /// Uniformly random permutation of 0..n-1.
  std::vector<std::size_t> permutation(std::size_t n);
  /// k distinct indices from [0, n), in draw order.
  std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k);

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace swae
