#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace zetalab {

// Counter-based generator: every draw is a pure function of
// (key, stream, counter), so any single term of any trial can be
// regenerated without streaming state.
namespace rng {

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline uint64_t mix3(uint64_t a, uint64_t b, uint64_t c) {
  uint64_t h = splitmix64(a);
  h = splitmix64(h ^ b);
  h = splitmix64(h ^ c);
  return h;
}

// uniform in [0, 1), 53 mantissa bits
inline double to_unit(uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

inline double uniform01(uint64_t key, uint64_t stream, uint64_t counter) {
  return to_unit(mix3(key, stream, counter));
}

// standard normal via Box-Muller on two derived counters
inline double gaussian(uint64_t key, uint64_t stream, uint64_t counter) {
  double u1 = to_unit(mix3(key, stream, 2 * counter));
  double u2 = to_unit(mix3(key, stream, 2 * counter + 1));
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  double r = std::sqrt(-2.0 * std::log1p(u1 - 1.0));
  return r * std::cos(6.283185307179586476925286766559 * u2);
}

// standard complex normal: E|Z|^2 = 1, Re and Im independent N(0, 1/2)
inline std::complex<double> complex_gaussian(uint64_t key, uint64_t stream,
                                             uint64_t counter) {
  double u1 = to_unit(mix3(key, stream, 2 * counter));
  double u2 = to_unit(mix3(key, stream, 2 * counter + 1));
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  double r = std::sqrt(-std::log1p(u1 - 1.0));
  double phi = 6.283185307179586476925286766559 * u2;
  return {r * std::cos(phi), r * std::sin(phi)};
}

// derives a submodule stream key from a master seed and a module name
uint64_t stream_key(uint64_t master_seed, const char* module_name);

}  // namespace rng
}  // namespace zetalab
