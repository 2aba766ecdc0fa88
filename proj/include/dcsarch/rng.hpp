#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace dcsarch {

using Rng = std::mt19937_64;

/// Uniform double in [0, 1) built from the top 53 bits, so streams are
/// identical across standard library implementations.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Draws index i with probability weights[i] / sum(weights).
/// Falls back to a uniform draw when the weights sum to zero.
std::size_t sample_weighted(std::span<const double> weights, Rng& rng);

/// splitmix64 finalizer; used to derive independent per-run / per-ant seeds.
inline std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
    return mix_seed(mix_seed(mix_seed(base) ^ a) ^ b);
}

}  // namespace dcsarch
