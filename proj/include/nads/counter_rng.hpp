#pragma once

#include <cstdint>

namespace nads {

// splitmix64, used as a counter-based generator: output n is the finalizer
// applied to seed + (n + 1) * gamma, so any index is O(1) to reach.
// Reports record the name and version next to seeded results; bump the version
// if the stream ever changes.
inline constexpr int kCounterRngVersion = 1;
inline constexpr const char* kCounterRngName = "splitmix64";

constexpr std::uint64_t splitmix64_finalize(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t counter_bits(std::uint64_t seed, std::uint64_t n) noexcept {
    return splitmix64_finalize(seed + (n + 1) * 0x9e3779b97f4a7c15ULL);
}

/// Uniform double in [0, 1) with 53 random bits.
constexpr double counter_uniform01(std::uint64_t seed, std::uint64_t n) noexcept {
    return static_cast<double>(counter_bits(seed, n) >> 11) * 0x1.0p-53;
}

}  // namespace nads
