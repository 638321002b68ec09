#include "spslab/rng.hpp"

namespace spslab {

std::uint64_t binomial(int n, int k) {
    if (k < 0 || n < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    std::uint64_t c = 1;
    for (int i = 1; i <= k; ++i) {
        // c * (n - k + i) / i is always integral at this point
        std::uint64_t num = static_cast<std::uint64_t>(n - k + i);
        if (c > UINT64_MAX / num)
            throw std::overflow_error("binomial: C(n,k) exceeds 64 bits");
        c = c * num / static_cast<std::uint64_t>(i);
    }
    return c;
}

Batch unrank_combination(int n, int k, std::uint64_t rank) {
    if (rank >= binomial(n, k))
        throw std::invalid_argument("unrank_combination: rank out of range");
    Batch out;
    out.reserve(static_cast<std::size_t>(k));
    int next = 0;
    for (int remaining = k; remaining > 0; --remaining) {
        for (int candidate = next;; ++candidate) {
            const std::uint64_t block = binomial(n - candidate - 1, remaining - 1);
            if (rank < block) {
                out.push_back(candidate);
                next = candidate + 1;
                break;
            }
            rank -= block;
        }
    }
    return out;
}

} // namespace spslab
