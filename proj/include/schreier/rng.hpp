#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace schreier {

// Seeded splitmix64 stream. All randomized operations in the library draw
// from this generator so that results are bit-reproducible across platforms
// (std::uniform_int_distribution is not portable, so we avoid <random> here).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform integer in [0, bound), bound >= 1. Rejection sampling keeps the
  // distribution exact.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  int below_int(int bound) { return static_cast<int>(below(static_cast<std::uint64_t>(bound))); }

  // Uniform double in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool coin(double p) { return unit() < p; }

  template <class T>
  void shuffle(std::vector<T>& xs) {
    for (std::size_t i = xs.size(); i > 1; --i) {
      std::swap(xs[i - 1], xs[below(i)]);
    }
  }

 private:
  std::uint64_t state_;
};

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) {
  return mix64(a + 0x9e3779b97f4a7c15ull + b);
}

inline std::uint64_t hash_str(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

// Deterministic coin for (seed, sample, cycle-id) triples; used by the
// per-cycle reversal samplers so that coins are independent across cycles
// and reproducible across runs.
inline bool keyed_coin(std::uint64_t seed, std::uint64_t sample, const std::string& key, double p) {
  const std::uint64_t h = hash_combine(hash_combine(seed, sample), hash_str(key));
  const double u = static_cast<double>(mix64(h) >> 11) * 0x1.0p-53;
  return u < p;
}

}  // namespace schreier
