#pragma once

#include <cstdint>
#include <random>

namespace foresight {

// splitmix64 finalizer; used to derive hierarchical seeds from (seed, h, g)
// style tuples.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
  return mix64(a ^ mix64(b));
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return mix64(mix64(a, b), c);
}

// Unbiased draw from [0, n). mt19937_64's output sequence is pinned by the
// standard; std::uniform_int_distribution is not, which would break the
// bit-identical determinism contract across standard libraries.
inline std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
  if (n <= 1) return 0;
  const std::uint64_t rem = (-n) % n;  // 2^64 mod n
  for (;;) {
    std::uint64_t x = rng();
    if (rem == 0 || x < -rem) return x % n;
  }
}

}  // namespace foresight
