#pragma once

#include "spslab/types.hpp"

#include <cstdint>
#include <stdexcept>

namespace spslab {

/// SplitMix64 word stream. All implementations must reproduce the exact
/// same word sequence from the same seed, so the constants are fixed here
/// and nowhere else.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform integer in [0, n) by rejection; unbiased.
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("below(0)");
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t w;
        do {
            w = next();
        } while (w >= limit);
        return w % n;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    std::uint64_t state() const { return state_; }

private:
    std::uint64_t state_;
};

/// C(n, k) in exact 64-bit arithmetic; throws on overflow.
std::uint64_t binomial(int n, int k);

/// The rank-th size-k subset of {0,...,n-1} in lexicographic order,
/// rank in [0, C(n,k)).
Batch unrank_combination(int n, int k, std::uint64_t rank);

} // namespace spslab
