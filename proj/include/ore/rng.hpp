#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

// Small deterministic RNG kit. Standard <random> distributions are
// implementation-defined, so everything that must reproduce byte-identical
// output across toolchains draws from these helpers instead.

namespace ore::rng {

inline uint64_t splitmix64(uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// FNV-1a, used to fold string ids into a stream seed.
inline uint64_t hash_str(std::string_view s, uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline uint64_t mix(uint64_t a, uint64_t b) {
  uint64_t state = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
  return splitmix64(state);
}

// Uniform in [0,1); 53-bit mantissa.
inline double uniform01(uint64_t& state) {
  return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
}

// Standard normal via Box-Muller; consumes two uniforms.
inline double normal(uint64_t& state) {
  double u1 = uniform01(state);
  double u2 = uniform01(state);
  if (u1 < 1e-300) u1 = 1e-300;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace ore::rng
