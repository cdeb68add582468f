#pragma once

// Deterministic random helpers.  std::uniform_int_distribution is allowed
// to differ between standard library implementations, so seeded runs that
// must reproduce byte-for-byte draw through these instead.

#include <cstdint>
#include <random>

namespace seqproc {

using Rng = std::mt19937_64;

// Uniform-ish draw from {0 .. m-1}.  The modulo bias at 64 bits is far
// below anything observable here; determinism is what matters.
inline std::uint64_t rng_below(Rng& rng, std::uint64_t m) {
    return m <= 1 ? 0 : rng() % m;
}

inline bool rng_coin(Rng& rng) { return rng() & 1u; }

}  // namespace seqproc
