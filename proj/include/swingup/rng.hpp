#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

namespace swingup {

/// Single deterministic random stream. A training run owns exactly one
/// instance; every stochastic draw (environment resets, exploration noise,
/// action sampling, replay sampling, minibatch shuffles) comes from it in
/// program order, so one seed pins the whole trajectory. All mappings from
/// raw bits to samples are implemented here rather than taken from
/// std::<distribution> types, which keeps the sequences identical across
/// standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform double in [0, 1).
  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  /// Standard normal (Box-Muller; consumes two raw draws per call).
  double normal() {
    double u1 = unit();
    while (u1 <= 0.0) u1 = unit();
    const double u2 = unit();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Uniform index in [0, n). Rejection sampling keeps the draw unbiased.
  std::size_t index(std::size_t n) {
    const std::uint64_t span = static_cast<std::uint64_t>(n);
    const std::uint64_t reject_below = (-span) % span;
    std::uint64_t x = gen_();
    while (x < reject_below) x = gen_();
    return static_cast<std::size_t>(x % span);
  }

  /// Fisher-Yates shuffle driven by index().
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[index(i)]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace swingup
