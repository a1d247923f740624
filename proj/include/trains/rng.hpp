#pragma once

#include <cstdint>

namespace trains {

/// splitmix64: tiny, fully portable generator. Used everywhere a seeded,
/// reproducible stream is required; per-batch streams are derived from a
/// master seed so that results do not depend on the worker count.
struct SplitMix64 {
  std::uint64_t state = 0;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }
};

/// Deterministic per-batch seed derivation.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t batch) {
  SplitMix64 g(master ^ (0x6a09e667f3bcc909ULL + batch * 0x9e3779b97f4a7c15ULL));
  return g.next();
}

}  // namespace trains
