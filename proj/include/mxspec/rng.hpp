#pragma once

#include <cstdint>
#include <initializer_list>
#include <string_view>

namespace mxspec {

/// SplitMix64 (Steele, Lea & Flood 2014). A 64-bit counter advanced by the
/// golden-ratio increment and passed through a fixed mixing function, so the
/// output stream is a pure function of the seed and easy to reproduce in any
/// language:
///
///   state += 0x9E3779B97F4A7C15
///   z = state
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   return z ^ (z >> 31)
///
/// Uniform reals take the top 53 bits: (next() >> 11) * 2^-53.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept;
  /// Uniform in [0, 1).
  double uniform() noexcept;
  /// True with probability p; p >= 1 always true, p <= 0 always false.
  bool bernoulli(double p) noexcept { return uniform() < p; }
  /// Uniform integer in [0, bound), bound > 0 (Lemire's rejection method).
  std::uint64_t below(std::uint64_t bound) noexcept;

 private:
  std::uint64_t state_;
};

/// The SplitMix64 finalizer applied to a single word.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Deterministic seed for a named stream. Folds the master seed, the FNV-1a
/// hash of the stream name and each tag (as raw 64-bit words) through mix64.
std::uint64_t derive_seed(std::uint64_t master, std::string_view stream,
                          std::initializer_list<std::uint64_t> tags = {}) noexcept;

/// The IEEE-754 bit pattern of a double, for use as a derive_seed tag.
std::uint64_t real_tag(double value) noexcept;

}  // namespace mxspec
