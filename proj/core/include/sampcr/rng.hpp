#pragma once

#include <cstdint>
#include <random>

namespace sampcr {

// splitmix64 finalizer; used to derive independent per-trial streams from a
// master seed so parallel or reordered evaluation cannot change results.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Counter-based split: stream `idx` of `seed` (and nested splits via chaining).
inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t idx) {
    return std::mt19937_64(mix64(mix64(seed) ^ mix64(idx * 0x9e3779b97f4a7c15ULL + 1)));
}

inline std::uint64_t subseed(std::uint64_t seed, std::uint64_t idx) {
    return mix64(mix64(seed) ^ mix64(idx * 0x9e3779b97f4a7c15ULL + 1));
}

}  // namespace sampcr
