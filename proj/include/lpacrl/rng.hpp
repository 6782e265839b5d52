#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace lpacrl {

/// Deterministic random stream with explicit splitting.
///
/// Every stream carries the key it was seeded from. `derive(a,b,c)` hashes the
/// key with the child ids and returns a fresh, statistically independent
/// stream. Parallel work is always given per-unit derived streams (one per
/// episode, one per evaluation task, ...), so thread count and scheduling
/// order cannot change any sampled value.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : key_(seed), engine_(mix(seed)) {}

  /// Child stream keyed by (parent key, a, b, c). Uses only the key, never
  /// the engine state, so derivation order does not matter.
  Rng derive(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) const {
    std::uint64_t k = key_;
    k = mix(k ^ 0x9e3779b97f4a7c15ULL);
    k = mix(k ^ a);
    k = mix(k ^ b);
    k = mix(k ^ c);
    return Rng(k);
  }

  std::uint64_t key() const { return key_; }

  /// Uniform in [0, 1). 53 random mantissa bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller. Implemented locally so results do not
  /// depend on the standard library's unspecified distribution algorithms.
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  double normal(double mean, double sd) { return mean + sd * normal(); }

  bool bernoulli(double p) { return uniform() < p; }

  /// Uniform integer in [0, n).
  std::int64_t uniform_int(std::int64_t n) {
    const double u = uniform();
    auto v = static_cast<std::int64_t>(u * static_cast<double>(n));
    return v >= n ? n - 1 : v;
  }

  /// -1 or +1 with equal probability.
  int sign() { return bernoulli(0.5) ? 1 : -1; }

 private:
  // splitmix64 finalizer
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::mt19937_64 engine_;
};

}  // namespace lpacrl
