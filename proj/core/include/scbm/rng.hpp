#pragma once

#include <cstdint>
#include <initializer_list>

namespace scbm {

/// splitmix64 mixing step (Vigna). Used both as a standalone mixer for seed
/// derivation and to expand a single seed into generator state.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derives an independent stream seed from a base seed and a path of indices.
/// Order-sensitive: derive_seed(s, {a, b}) != derive_seed(s, {b, a}).
/// Every stochastic operation in the library documents the path it uses, so
/// parallel replications and candidate evaluations draw from disjoint streams.
inline std::uint64_t derive_seed(std::uint64_t base,
                                 std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = splitmix64(base ^ 0x8f58b4f2d6c39a11ULL);
  for (std::uint64_t p : path) {
    s = splitmix64(s ^ splitmix64(p ^ 0xd1b54a32d192ed03ULL));
  }
  return s;
}

/// xoshiro256++ generator. Self-contained so that streams are identical
/// across platforms and standard libraries; state is seeded via splitmix64
/// expansion of a single 64-bit seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& word : state_) {
      s = splitmix64(s);
      word = s;
    }
    // All-zero state is invalid for xoshiro; splitmix64 of anything is
    // nonzero in at least one word with overwhelming probability, but seed
    // expansion of pathological inputs is guarded anyway.
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) {
      state_[0] = 0x9e3779b97f4a7c15ULL;
    }
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

  /// Uniform double in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in {0, …, n-1}. Unbiased via rejection sampling.
  std::uint64_t uniform_int(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t state_[4];
};

}  // namespace scbm
