#ifndef FRAMEKIT_RNG_HPP
#define FRAMEKIT_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>

namespace framekit {

/// Stateless counter-based generator: every draw is a pure function of
/// (seed, index), so streams are reproducible across platforms and can be
/// consumed out of order or from several threads.
///
/// The mixing function is the SplitMix64 finalizer applied to position
/// `index` of the Weyl sequence keyed by the seed.
class CounterRng {
 public:
  explicit constexpr CounterRng(std::uint64_t seed) noexcept : key_(mix(seed)) {}

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  constexpr std::uint64_t bits(std::uint64_t index) const noexcept {
    return mix(key_ + index * 0x9E3779B97F4A7C15ULL);
  }

  /// Uniform on (0, 1].
  double uniform(std::uint64_t index) const noexcept {
    return static_cast<double>((bits(index) >> 11) + 1) * 0x1.0p-53;
  }

  /// Uniform on [lo, hi].
  double uniform(std::uint64_t index, double lo, double hi) const noexcept {
    return lo + (hi - lo) * uniform(index);
  }

  /// +1 or -1 with equal probability.
  double sign(std::uint64_t index) const noexcept {
    return (bits(index) >> 63) ? -1.0 : 1.0;
  }

  /// Standard normal via Box-Muller on draws 2*index and 2*index+1.
  double normal(std::uint64_t index) const noexcept {
    const double u1 = uniform(2 * index);
    const double u2 = uniform(2 * index + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Independent sub-stream, e.g. one per trial or per generated object.
  constexpr CounterRng fork(std::uint64_t stream) const noexcept {
    return CounterRng(key_ ^ mix(stream + 0xD1B54A32D192ED03ULL), raw_tag{});
  }

 private:
  struct raw_tag {};
  constexpr CounterRng(std::uint64_t key, raw_tag) noexcept : key_(key) {}

  std::uint64_t key_;
};

}  // namespace framekit

#endif  // FRAMEKIT_RNG_HPP
