#pragma once

// Deterministic PRNG with a fixed algorithm (splitmix64) so seeded runs are
// byte-identical across platforms and standard-library versions.

#include <cstdint>

namespace adfam {

class Prng {
 public:
  explicit Prng(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n) by rejection; n must be positive.
  uint64_t below(uint64_t n) {
    uint64_t limit = ~uint64_t(0) - ~uint64_t(0) % n;
    uint64_t v;
    do {
      v = next();
    } while (v >= limit);
    return v % n;
  }

  int range(int lo, int hi) {  // uniform in [lo, hi)
    return lo + static_cast<int>(below(static_cast<uint64_t>(hi - lo)));
  }

  bool coin() { return next() & 1; }

 private:
  uint64_t state_;
};

}  // namespace adfam
