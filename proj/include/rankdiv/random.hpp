// Copyright 2026 The rankdiv Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>

namespace rankdiv {

/// Seedable, splittable SplitMix64 generator. Every draw is defined here
/// (no std:: distributions), so streams are identical across standard
/// libraries.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  /// Independent child stream; does not advance this generator.
  Rng split(std::uint64_t stream) const { return Rng(mix(state_ ^ mix(stream + 0xd1b54a32d192ed03ULL))); }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = max() - max() % n;
    std::uint64_t x;
    do {
      x = (*this)();
    } while (x >= limit);
    return x % n;
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  /// Poisson draw by sequential inversion; large means are split into
  /// chunks so exp(-mean) never underflows.
  std::uint64_t poisson(double mean) {
    if (!(mean > 0.0)) return 0;
    std::uint64_t total = 0;
    const auto chunks = static_cast<std::uint64_t>(std::ceil(mean / 32.0));
    const double lambda = mean / static_cast<double>(chunks);
    for (std::uint64_t c = 0; c < chunks; ++c) {
      double u = uniform();
      double p = std::exp(-lambda);
      double cdf = p;
      std::uint64_t k = 0;
      while (u > cdf && k < 10000) {
        ++k;
        p *= lambda / static_cast<double>(k);
        cdf += p;
      }
      total += k;
    }
    return total;
  }

  template <typename T>
  void shuffle(std::span<T> xs) {
    for (std::size_t i = xs.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(xs[i - 1], xs[j]);
    }
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace rankdiv
