#pragma once

#include <cstdint>

namespace ipstar {

/// splitmix64 (Vigna's public-domain generator). The constants below fully
/// specify the stream, so it can be reproduced bit-for-bit in any language.
/// Stream version tag: "splitmix64/1".
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Value in [0, bound), plain modulo; the exact stream is part of the
    /// report reproducibility contract.
    std::uint64_t next_below(std::uint64_t bound) { return next() % bound; }

    /// Value in [lo, hi], inclusive.
    std::int64_t next_in(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(next_below(static_cast<std::uint64_t>(hi - lo + 1)));
    }
};

inline constexpr const char* kPrngVersion = "splitmix64/1";

}  // namespace ipstar
