#pragma once

#include <cstdint>
#include <random>

namespace qpcut::detail {

inline constexpr std::uint64_t golden_gamma = 0x9E3779B97F4A7C15ULL;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Stable seed for the `index`-th derived stream of `base`.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept {
    return mix64(base + golden_gamma * (index + 1));
}

using engine = std::mt19937_64;

// std::uniform_real_distribution is implementation-defined; keep streams
// identical across standard libraries.
inline double uniform01(engine& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::uint64_t uniform_below(engine& rng, std::uint64_t bound) {
    // Lemire-style rejection keeps this unbiased.
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        const std::uint64_t r = rng();
        if (r >= threshold) return r % bound;
    }
}

} // namespace qpcut::detail
