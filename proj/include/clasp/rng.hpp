#pragma once

#include <cstdint>

namespace clasp {

// splitmix64: tiny seedable generator with identical output on every
// platform, so seeded runs reproduce bit-for-bit.
struct SplitMix64 {
    std::uint64_t state = 0;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        state += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // uniform draw from [0, bound); bound must be >= 1
    std::uint64_t below(std::uint64_t bound) { return next() % bound; }
};

// Derives one independent stream per ensemble iteration so the sampled
// intervals do not depend on evaluation order.
inline std::uint64_t iteration_seed(std::uint64_t seed, std::uint64_t iteration) {
    return seed + 0x9E3779B97F4A7C15ull * (iteration + 1);
}

}  // namespace clasp
