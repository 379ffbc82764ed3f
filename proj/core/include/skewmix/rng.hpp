#ifndef SKEWMIX_RNG_HPP
#define SKEWMIX_RNG_HPP

#include <cstdint>
#include <limits>

namespace skewmix {

/// SplitMix64: the only generator used anywhere in the project.
///
///   state += 0x9E3779B97F4A7C15
///   z = state
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   return z ^ (z >> 31)
///
/// Bounded draws use rejection on the raw 64-bit output (see uniform()), so
/// outputs are reproducible across platforms and standard libraries.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit constexpr SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() { return next(); }

  constexpr std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  /// Uniform integer in [0, bound). bound must be nonzero.
  /// Draws r until r >= (2^64 - bound) mod bound, then returns r mod bound.
  constexpr std::uint64_t uniform(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  constexpr std::uint64_t state() const { return state_; }

  /// The SplitMix64 output finalizer.
  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Independent stream for task `index` of a run seeded with `seed`.
  static constexpr SplitMix64 derive(std::uint64_t seed, std::uint64_t index) {
    return SplitMix64(mix(seed ^ mix(index + 0x9E3779B97F4A7C15ULL)));
  }

 private:
  std::uint64_t state_;
};

}  // namespace skewmix

#endif  // SKEWMIX_RNG_HPP
