#pragma once

#include <cstdint>
#include <vector>

namespace mirrorgate::util {

/// Deterministic 64-bit generator (splitmix64). Used everywhere randomness is
/// needed so that results are bit-identical across platforms and standard
/// library versions; std::shuffle and the std distributions are not
/// reproducible across implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, bound) via rejection sampling; bound must be > 0.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      std::uint64_t r = next_u64();
      if (r >= threshold) {
        return r % bound;
      }
    }
  }

  /// Uniform double in [0, 1) with 53 bits of precision.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  bool next_bernoulli(double p) { return next_double() < p; }

  /// Derives an independent stream for a parallel unit; (seed, index) pairs
  /// yield streams equal to what a serial order would use.
  static Rng derive(std::uint64_t seed, std::uint64_t stream_index) {
    Rng mix(seed ^ (0xA0761D6478BD642Full * (stream_index + 1)));
    std::uint64_t s = mix.next_u64();
    return Rng(s);
  }

  /// Fisher-Yates shuffle, deterministic for a given generator state.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    if (v.size() < 2) return;
    for (std::size_t i = v.size() - 1; i > 0; --i) {
      std::size_t j = static_cast<std::size_t>(next_below(i + 1));
      using std::swap;
      swap(v[i], v[j]);
    }
  }

 private:
  std::uint64_t state_;
};

}  // namespace mirrorgate::util
