#pragma once

#include <cstdint>
#include <random>

namespace votekit {

// Uniform draw in [lo, hi] that does not go through std::uniform_int_distribution,
// whose output is implementation-defined. Same seed, same stream, everywhere.
inline std::uint64_t draw_uniform(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi) {
    const std::uint64_t span = hi - lo + 1;
    // Rejection sampling to stay exactly uniform.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t x = rng();
    while (x >= limit)
        x = rng();
    return lo + x % span;
}

} // namespace votekit
