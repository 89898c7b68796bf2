#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "caqrp/core.hpp"

namespace caqrp {

/// splitmix64 step. Used to derive substream seeds from the master seed so
/// that draws made by one subsystem never shift the draws of another.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d065b176fbc3a7ull;  // xor-shift-multiply mix
  return z ^ (z >> 31);
}

/// Fixed substream labels. Values are part of the reproducibility contract:
/// changing them changes every seeded run.
enum class Substream : std::uint64_t {
  topology = 0,
  mobility = 1,
  energy = 2,
  corpus = 3,
  queries = 4,
  protocol = 5,
};

/// Deterministic random source. All distribution helpers are implemented
/// in-house because the standard <random> distributions are not guaranteed
/// to produce identical sequences across library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static Rng for_substream(std::uint64_t master_seed, Substream s) {
    std::uint64_t state = master_seed;
    std::uint64_t derived = splitmix64(state);
    derived ^= splitmix64(state) + static_cast<std::uint64_t>(s) * 0x9e3779b97f4a7c15ull;
    std::uint64_t tail = derived;
    return Rng(splitmix64(tail));
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) {
    if (!(lo <= hi)) throw ValidationError("uniform: lo > hi");
    return lo + (hi - lo) * next_double();
  }

  /// Uniform integer in [0, bound). Rejection sampling keeps it unbiased.
  std::uint64_t uniform_below(std::uint64_t bound) {
    if (bound == 0) throw ValidationError("uniform_below: bound must be positive");
    const std::uint64_t threshold = (0ull - bound) % bound;
    for (;;) {
      std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  /// Uniform integer in [lo, hi], inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    if (lo > hi) throw ValidationError("uniform_int: lo > hi");
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(uniform_below(span));
  }

  bool bernoulli(double p) { return next_double() < p; }

  /// First k positions of a Fisher-Yates shuffle over [0, n). Order of the
  /// selected indices is itself random, which the random-forwarding baseline
  /// relies on.
  std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k) {
    if (k > n) k = n;
    std::vector<std::size_t> pool(n);
    for (std::size_t i = 0; i < n; ++i) pool[i] = i;
    for (std::size_t i = 0; i < k; ++i) {
      std::size_t j = i + static_cast<std::size_t>(uniform_below(n - i));
      std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return pool;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace caqrp
