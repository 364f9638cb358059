#pragma once

#include <cstdint>
#include <limits>
#include <span>

namespace aaa {

/// Counter-based generator. The output at position `c` of a stream is a pure
/// function of (key, c), so independent streams can be split off a single
/// top-level seed and consumed in any order without changing results.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : key_(mix(seed ^ mix(stream * kGolden + kStreamSalt))) {}

  /// Child stream; distinct ids give statistically independent streams.
  [[nodiscard]] Rng split(std::uint64_t stream) const noexcept {
    Rng child(0);
    child.key_ = mix(key_ ^ mix((stream + 1) * kGolden + kSplitSalt));
    return child;
  }

  std::uint64_t next_u64() noexcept { return mix(key_ + (counter_++) * kGolden); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// True with probability p. Exact for p = 0 and p = 1.
  bool bernoulli(double p) noexcept { return uniform() < p; }

  std::uint8_t bit() noexcept { return static_cast<std::uint8_t>(next_u64() >> 63); }

  void fill(std::span<std::uint64_t> words) noexcept {
    for (auto& w : words) w = next_u64();
  }

  std::uint64_t counter() const noexcept { return counter_; }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }
  result_type operator()() noexcept { return next_u64(); }

 private:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
  static constexpr std::uint64_t kStreamSalt = 0xD1B54A32D192ED03ULL;
  static constexpr std::uint64_t kSplitSalt = 0x8CB92BA72F3D8DD7ULL;

  // splitmix64 finalizer
  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace aaa
