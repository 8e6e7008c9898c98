#pragma once

#include <cstdint>

namespace toph {

/// SplitMix64 finalizer (Steele, Lea & Flood 2014).
constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Counter-based generator: the i-th output of stream `s` under seed `k` is
///
///     splitmix64(splitmix64(splitmix64(k) ^ s) ^ i)
///
/// with i counting from 0. Any output can be recomputed from (k, s, i) alone,
/// so batches generate identically regardless of order or language. Doubles
/// take the top 53 bits: (x >> 11) * 2^-53, which lies in [0, 1).
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
      : key_(splitmix64(splitmix64(seed) ^ stream)) {}

  static constexpr std::uint64_t at(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) noexcept {
    return splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ counter);
  }

  std::uint64_t next_u64() noexcept { return splitmix64(key_ ^ counter_++); }

  /// Uniform in [0, 1).
  double next_double() noexcept { return to_unit(next_u64()); }

  /// Uniform in (0, 1], safe as a log argument.
  double next_open_double() noexcept { return 1.0 - next_double(); }

  /// Standard normal via Box-Muller; each call consumes two outputs.
  double next_normal() noexcept;

  /// Gamma(shape, 1) via Marsaglia-Tsang, boosted by U^(1/shape) when shape < 1.
  double next_gamma(double shape) noexcept;

  /// Uniform integer in [0, bound) by multiply-shift; bound > 0.
  std::uint64_t next_below(std::uint64_t bound) noexcept;

  static constexpr double to_unit(std::uint64_t x) noexcept {
    return static_cast<double>(x >> 11) * 0x1.0p-53;
  }

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace toph
