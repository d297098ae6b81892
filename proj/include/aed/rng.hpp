#pragma once

// Position-based random streams: the generator for (seed, frame, stream) is
// fixed no matter which thread or in which order a frame is processed.

#include <cstdint>

#include "aed/automorphism.hpp"

namespace aed {

enum class Stream : std::uint64_t { Channel = 1, Permutation = 2, Ensemble = 3, Verification = 4 };

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t frame, Stream stream) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ static_cast<std::uint64_t>(stream));
    return splitmix64(h ^ frame);
}

inline Rng make_rng(std::uint64_t seed, std::uint64_t frame, Stream stream) {
    return Rng(stream_seed(seed, frame, stream));
}

}  // namespace aed
