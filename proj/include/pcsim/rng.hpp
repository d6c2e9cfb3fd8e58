#pragma once

#include <cstdint>
#include <vector>

namespace pcsim {

// Deterministic splittable PRNG (splitmix64 core). Bounded draws use rejection
// sampling on the raw 64-bit stream, so sequences are identical across
// platforms and standard-library versions — required for byte-identical
// reproducible output.
class SplitRng {
 public:
  explicit SplitRng(std::uint64_t seed) : state_(mix(seed ^ 0x5851F42D4C957F2DULL)) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  // Derives an independent child stream without advancing this one. Children
  // with distinct tags (and their descendants) never share state.
  SplitRng split(std::uint64_t tag) const {
    return SplitRng(mix(state_ + (tag + 1) * 0xBF58476D1CE4E5B9ULL));
  }

  // Uniform draw from [0, bound), bound >= 1.
  std::uint64_t uniform(std::uint64_t bound) {
    const std::uint64_t limit = bound * (UINT64_MAX / bound);
    for (;;) {
      std::uint64_t x = next();
      if (x < limit) return x % bound;
    }
  }

  // Uniform sign in {-1, +1}.
  int sign() { return (next() & 1) ? 1 : -1; }

  // Uniformly random permutation of {0, ..., n-1} (Fisher–Yates).
  std::vector<std::size_t> permutation(std::size_t n) {
    std::vector<std::size_t> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = i;
    for (std::size_t i = n; i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(uniform(i));
      std::swap(p[i - 1], p[j]);
    }
    return p;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t state_;
};

}  // namespace pcsim
