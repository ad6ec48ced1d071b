#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace qsmooth {

// splitmix64 step; used to derive independent, reproducible sub-streams.
inline uint64_t mix64(uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline uint64_t derive_seed(uint64_t seed, uint64_t stream) {
    return mix64(mix64(seed) ^ mix64(stream));
}

inline std::mt19937_64 make_rng(uint64_t seed, uint64_t stream = 0) {
    return std::mt19937_64(derive_seed(seed, stream));
}

// Uniform in [0,1) with 53 bits; avoids std::uniform_real_distribution, whose
// output sequence is not pinned by the standard.
inline double uniform01(std::mt19937_64 &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Index of the first cdf entry exceeding u. cdf must be nondecreasing with
// final entry >= 1 - 1e-9; the last index absorbs any rounding shortfall.
inline size_t sample_cdf(const std::vector<double> &cdf, double u) {
    size_t lo = 0, hi = cdf.size() - 1;
    while (lo < hi) {
        size_t mid = (lo + hi) / 2;
        if (cdf[mid] > u) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    return lo;
}

} // namespace qsmooth
