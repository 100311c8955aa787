#pragma once

#include <cstdint>

namespace uwd::detail {

// splitmix64 finalizer; the workhorse behind lattice hashing and seed
// derivation for per-frame RNG streams.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline double lattice_value(std::int64_t ix, std::int64_t iy,
                            std::uint64_t seed) {
  const std::uint64_t key =
      (static_cast<std::uint64_t>(ix) * 0x9e3779b97f4a7c15ull) ^
      (static_cast<std::uint64_t>(iy) * 0xc2b2ae3d27d4eb4full) ^ seed;
  return static_cast<double>(mix64(key) >> 11) * 0x1.0p-53;
}

inline double fade(double t) { return t * t * t * (t * (t * 6.0 - 15.0) + 10.0); }

// Smooth value noise on the unit lattice, range [0, 1].
double value_noise(double x, double y, std::uint64_t seed);

// Octave sum (persistence 0.5), renormalized to [0, 1].
double fractal_noise(double x, double y, std::uint64_t seed, int octaves);

}  // namespace uwd::detail
