#pragma once

// Reproducible per-item random streams: item i of a run seeded with s draws
// from mt19937_64 seeded by splitmix64(s, i), independent of scheduling.

#include <cstdint>
#include <random>

namespace coszero {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t index) {
    return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL)));
}

}  // namespace coszero
