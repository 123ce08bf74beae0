// Seeded random streams.  std::mt19937_64 is fully specified by the
// standard, so sequences are identical across platforms and runs.  Batch
// streams are derived from (seed, stream_index) through splitmix64, which
// keeps sample batches independent of the worker count.
#pragma once

#include "thetalab/numeric.hpp"

#include <cstdint>
#include <random>

namespace thetalab {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t s = seed;
    std::uint64_t a = splitmix64(s);
    s ^= stream * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL;
    std::uint64_t c = splitmix64(s);
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return std::mt19937_64(seq);
}

// Uniform in [0,1) with 128 random bits.
template <class Real>
inline Real uniform01(std::mt19937_64& g) {
    Real hi = Real(g()) , lo = Real(g());
    return ldexp(hi, -64) + ldexp(lo, -128);
}

// Standard normal via Box-Muller; consumes exactly two 128-bit uniforms.
template <class Real>
inline Real standard_normal(std::mt19937_64& g) {
    Real u1 = uniform01<Real>(g);
    Real u2 = uniform01<Real>(g);
    // Guard the log: shift u1 into (0,1].
    u1 = Real(1) - u1;
    return sqrt(Real(-2) * log(u1)) * cos(Real(2) * pi_v<Real>() * u2);
}

}  // namespace thetalab
