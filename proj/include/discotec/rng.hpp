#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace discotec {

// SplitMix64 finalizer, used only to derive seeds.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Seedable generator with an explicit stream-splitting rule:
// Rng::stream(seed, i) is the i-th child stream of `seed` (one stream per
// model index, repeat index, ...). Identical (seed, i) pairs produce
// identical draws on every platform: mt19937_64 output is fixed by the
// standard and the uniform draws below avoid library-specific
// distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static Rng stream(std::uint64_t seed, std::uint64_t index) {
    return Rng(mix64(mix64(seed) ^ mix64(index + 0x51ed270b3a2f90c5ull)));
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n), unbiased via rejection.
  std::uint64_t uniform_below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t r = engine_();
      if (r >= threshold) return r % n;
    }
  }

  // Standard normal via Box-Muller (two draws per call, no caching).
  double gaussian() {
    double u;
    do {
      u = uniform();
    } while (u == 0.0);
    const double v = uniform();
    return std::sqrt(-2.0 * std::log(u)) *
           std::cos(6.283185307179586476925286766559 * v);
  }

  // First m entries of a Fisher-Yates pass over 0..n-1.
  std::vector<int> sample_without_replacement(int n, int m) {
    std::vector<int> pool(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
    for (int i = 0; i < m; ++i) {
      const auto j = static_cast<int>(
          uniform_below(static_cast<std::uint64_t>(n - i)) + i);
      std::swap(pool[static_cast<std::size_t>(i)],
                pool[static_cast<std::size_t>(j)]);
    }
    pool.resize(static_cast<std::size_t>(m));
    return pool;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace discotec
