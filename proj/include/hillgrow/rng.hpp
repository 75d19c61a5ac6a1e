#pragma once

#include <cstdint>

namespace hillgrow {

// Counter-mode splitmix64. The i-th draw of the stream seeded with s is a
// pure function of (s, i): the state walks s + (i+1)*GOLDEN and the output
// finalizer whitens it. Pure addressing buys O(1) replay from any index,
// order independence, and byte-identical serial and parallel runs.

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

inline constexpr std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + (index + 1) * kGoldenGamma;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Uniform double in [0, 1) carrying the full 53-bit mantissa.
inline constexpr double uniform01_at(std::uint64_t seed, std::uint64_t index) {
    return static_cast<double>(splitmix64_at(seed, index) >> 11) * 0x1.0p-53;
}

// Stable substream derivation; the extra mixing round keeps sibling streams
// decorrelated even for small consecutive salts.
inline constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt) {
    return splitmix64_at(base ^ 0x6a09e667f3bcc909ULL, salt);
}

}  // namespace hillgrow
