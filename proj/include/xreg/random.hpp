#pragma once

#include <cstdint>

namespace xreg {

/// SplitMix64 generator. The stream is fully specified, so every dataset,
/// split and fold assignment derived from a seed is reproducible bit for bit
/// in any language that implements the same three lines of mixing.
///
///   state += 0x9E3779B97F4A7C15
///   z = (state ^ (state >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   return z ^ (z >> 31)
///
/// uniform() maps the top 53 bits of the next output to [0, 1).
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next() noexcept {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    double uniform() noexcept {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

    // Unbiased integer in [0, bound) by rejection; bound must be positive.
    std::uint64_t below(std::uint64_t bound) noexcept {
        const std::uint64_t limit = bound * (UINT64_MAX / bound);
        std::uint64_t v = next();
        while (v >= limit) v = next();
        return v % bound;
    }

private:
    std::uint64_t state_;
};

}  // namespace xreg
