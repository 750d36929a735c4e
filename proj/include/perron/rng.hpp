#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace perron::detail {

/// Deterministic per-stream random source.  Every (seed, stream) pair gives
/// an independent, reproducible sequence regardless of platform: we only use
/// the raw mt19937_64 output and do the uniform/exponential transforms
/// ourselves (std::*_distribution is implementation-defined).
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream),
                      static_cast<std::uint32_t>(stream >> 32)};
    gen_.seed(seq);
  }

  /// Uniform double in [0, 1).
  double uniform() { return (gen_() >> 11) * 0x1.0p-53; }

  /// Standard exponential variate, strictly positive.
  double exponential() {
    double e = 0.0;
    while (e <= 0.0) e = -std::log1p(-uniform());
    return e;
  }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return gen_() % n; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace perron::detail
