#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace slitflow {

// SplitMix64 finalizer. This is the one mixing primitive behind every random
// number the library draws, so paths are reproducible from (seed, key) alone.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// Counter-based hash of (seed, stream, counter): one chained mix per word.
constexpr std::uint64_t key_hash(std::uint64_t seed, std::uint64_t stream,
                                 std::uint64_t counter) noexcept {
  std::uint64_t h = mix64(seed + kGolden);
  h = mix64(h ^ (stream + kGolden));
  h = mix64(h ^ (counter + kGolden));
  return h;
}

// Uniform in (0,1); the half-ulp offset keeps log() finite.
inline double to_unit(std::uint64_t h) noexcept {
  return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

// Standard Gaussian keyed on (seed, stream, counter); Box-Muller, cosine branch.
// Drivers use stream = driver index and counter = accepted substep index, so the
// noise a driver sees does not depend on how other substeps were refined.
inline double gaussian_at(std::uint64_t seed, std::uint64_t stream,
                          std::uint64_t counter) noexcept {
  const double u1 = to_unit(key_hash(seed, stream, 2 * counter));
  const double u2 = to_unit(key_hash(seed, stream, 2 * counter + 1));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

// Sequential stream view of the same generator, for samplers that just need
// a reproducible sequence (shuffles, rejection sampling).
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : seed_(seed), stream_(stream) {}

  std::uint64_t next_u64() noexcept { return key_hash(seed_, stream_, counter_++); }
  double next_unit() noexcept { return to_unit(next_u64()); }

  // Unbiased integer in [0, n) by rejection.
  std::uint64_t next_below(std::uint64_t n) noexcept {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v = next_u64();
    while (v >= limit) v = next_u64();
    return v % n;
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

}  // namespace slitflow
