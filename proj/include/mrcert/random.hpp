#pragma once
// Seeded random streams. Uniform reals are derived from the raw 64-bit engine
// output directly so sequences are identical across standard libraries.

#include <cstdint>
#include <random>

namespace mrcert {

using Rng = std::mt19937_64;

/// Uniform on [0, 1) with 53 random mantissa bits.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

}  // namespace mrcert
