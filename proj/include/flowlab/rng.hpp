#pragma once

#include <cstdint>

namespace flowlab {

// SplitMix64. Tiny, seedable, identical on every platform; used wherever a
// reproducible stream is needed (start vectors, random presets, test fields).
struct SplitMix64 {
  uint64_t state;
  explicit SplitMix64(uint64_t seed) : state(seed) {}

  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  // uniform in [-1, 1)
  double symmetric() { return 2.0 * uniform() - 1.0; }
  // uniform in [lo, hi)
  double range(double lo, double hi) { return lo + (hi - lo) * uniform(); }
};

}  // namespace flowlab
