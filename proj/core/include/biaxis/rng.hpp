#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace biaxis {

// splitmix64: cheap seed mixer. Used to derive independent per-item
// streams from (seed, index) so results do not depend on scheduling order.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed ^ splitmix64(stream));
}

// FNV-1a, the stable id hash for prompt instances. Stays fixed across
// platforms and releases so ledgers written elsewhere remain resumable.
inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[v & 0xf];
    v >>= 4;
  }
  return out;
}

// Bounded draw via modulo on the raw engine output. The tiny modulo bias
// is irrelevant for resampling, and unlike uniform_int_distribution the
// result is identical on every standard library.
inline std::size_t bounded(std::mt19937_64& rng, std::size_t n) {
  return static_cast<std::size_t>(rng() % n);
}

}  // namespace biaxis
