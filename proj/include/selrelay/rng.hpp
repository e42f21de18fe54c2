#pragma once

#include <cstdint>
#include <random>

namespace selrelay {

/// SplitMix64 step. Used to derive independent sub-seeds (per hop, per
/// replication) from a single user seed; the derivation is part of the
/// reproducibility contract and is documented in the README.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// n-th SplitMix64 output of a seed without mutating caller state.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t s = seed;
    std::uint64_t v = 0;
    for (std::uint64_t i = 0; i <= index; ++i) v = splitmix64(s);
    return v;
}

/// Uniform in [0,1) from the top 53 bits of an engine draw. We avoid
/// std::uniform_real_distribution because its output is not pinned by the
/// standard; this mapping is.
inline double uniform01(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

inline const char* rng_algorithm_name() { return "splitmix64+mt19937_64"; }

} // namespace selrelay
