#pragma once

#include <cstdint>
#include <cmath>

namespace spiralscan {

// Self-contained deterministic generator (splitmix64 stream, Box-Muller
// normals). std::normal_distribution is implementation-defined, which would
// break the bit-reproducibility contract of seeded runs; this one is pinned.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in (0, 1]; safe as a log() argument.
  double uniform_pos() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal, one Box-Muller cosine branch per draw.
  double normal() {
    const double u1 = uniform_pos();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  double normal(double stddev) { return normal() * stddev; }

  // Derives an independent stream, e.g. one per seed index.
  static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    Rng r(a ^ (0x9e3779b97f4a7c15ULL + (b << 6) + (b >> 2)));
    r.next_u64();
    return r.next_u64();
  }

private:
  std::uint64_t state_;
};

} // namespace spiralscan
