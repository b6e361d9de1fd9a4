#pragma once

// Seeded randomness with a platform-stable stream: std::mt19937_64 is
// specified bit-exactly by the standard, and bounded draws use rejection
// sampling here instead of std::uniform_int_distribution (whose output is
// implementation-defined).

#include <cstdint>
#include <random>
#include <vector>

#include "grpmem/permutation.hpp"

namespace grpmem {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, n), n > 0.
    std::uint64_t below(std::uint64_t n)
    {
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t x = engine_();
            if (x >= threshold) return x % n;
        }
    }

    /// Uniform in [lo, hi].
    std::uint64_t between(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }

    bool coin(std::uint64_t num = 1, std::uint64_t den = 2) { return below(den) < num; }

private:
    std::mt19937_64 engine_;
};

inline Permutation random_permutation(std::size_t degree, Rng& rng)
{
    std::vector<Point> img(degree);
    for (Point i = 0; i < degree; ++i) img[i] = i;
    for (std::size_t i = degree; i > 1; --i) std::swap(img[i - 1], img[rng.below(i)]);
    return Permutation::from_images(std::move(img));
}

} // namespace grpmem
