#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <utility>
#include <vector>

namespace binpack3d {

/// Seeded random stream. Draws are built directly from the engine's 64-bit
/// output so sequences are identical across standard library implementations.
class Stream {
 public:
  explicit Stream(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    while (true) {
      std::uint64_t r = engine_();
      if (r >= threshold) return r % n;
    }
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

  /// Two distinct uniform values from [0, n), n >= 2.
  std::pair<std::size_t, std::size_t> distinct_pair(std::size_t n) {
    std::size_t a = below(n);
    std::size_t b = below(n - 1);
    if (b >= a) ++b;
    return {a, b};
  }

 private:
  std::mt19937_64 engine_;
};

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Pair index reserved for the coordinator's own stream in each generation.
inline constexpr std::uint64_t kCoordinatorStream = std::numeric_limits<std::uint64_t>::max();

/// Pure function of its inputs: every (generation, pair) gets its own stream.
inline Stream derive_stream(std::uint64_t root_seed, std::uint64_t generation, std::uint64_t pair_index) {
  std::uint64_t h = splitmix64(root_seed);
  h = splitmix64(h ^ splitmix64(generation + 0x632be59bd9b4e019ULL));
  h = splitmix64(h ^ splitmix64(pair_index + 0x8cb92ba72f3d8dd7ULL));
  return Stream(h);
}

}  // namespace binpack3d
