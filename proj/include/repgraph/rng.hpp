#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "repgraph/types.hpp"

namespace repgraph {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Deterministic random stream (xoshiro256++ core, hand-rolled transforms).
///
/// Every draw path is fixed in this file, with no std::*_distribution
/// involved, so a given (seed, stream) pair yields the same sequence on any
/// platform and under any thread schedule. Independent streams for e.g.
/// per-subject generation come from substream().
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& word : state_) word = x = splitmix64(x);
  }

  /// Independent stream derived from (seed, stream_id).
  static Rng substream(std::uint64_t seed, std::uint64_t stream_id) {
    return Rng(splitmix64(seed ^ splitmix64(stream_id + 0x632be59bd9b4e019ULL)));
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform on [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller; pairs are cached.
  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    const double u1 = 1.0 - uniform01();  // (0, 1]
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    cached_ = radius * std::sin(angle);
    have_cached_ = true;
    return radius * std::cos(angle);
  }

  /// Uniform integer in [0, n), unbiased.
  std::uint64_t uniform_below(std::uint64_t n) {
    if (n == 0) throw value_error("uniform_below: n must be positive");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % n;
  }

  bool bernoulli(double p) { return uniform01() < p; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// First k entries of a uniformly shuffled [0, population) (partial Fisher-Yates).
  std::vector<int> sample_without_replacement(int population, int k) {
    std::vector<int> pool(population);
    for (int i = 0; i < population; ++i) pool[i] = i;
    const int take = std::min(k, population);
    for (int i = 0; i < take; ++i) {
      const int j = i + static_cast<int>(uniform_below(static_cast<std::uint64_t>(population - i)));
      std::swap(pool[i], pool[j]);
    }
    pool.resize(take);
    return pool;
  }

  std::vector<int> permutation(int count) { return sample_without_replacement(count, count); }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t state_[4] = {};
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace repgraph
