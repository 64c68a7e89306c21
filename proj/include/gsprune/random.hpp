#pragma once

#include <cstdint>

namespace gsprune {

// splitmix64: tiny stateless mixer used for reproducible jitter and seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Deterministic uniform sample in [0, 1) keyed by (seed, index).
inline double hash_unit(std::uint64_t seed, std::uint64_t index) {
    const std::uint64_t h = splitmix64(splitmix64(seed) ^ (index + 0x632be59bd9b4e019ULL));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

// Deterministic uniform sample in [-1, 1) keyed by (seed, index).
inline double hash_symmetric(std::uint64_t seed, std::uint64_t index) {
    return 2.0 * hash_unit(seed, index) - 1.0;
}

} // namespace gsprune
