#pragma once

#include <cstdint>
#include <random>

namespace fina {

// splitmix64 finalizer; used to derive independent seeds from a master seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Stream k of a master seed: splitmix64(master ^ golden-ratio * (k+1)).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    return splitmix64(master ^ (0x9E3779B97F4A7C15ULL * (stream + 1)));
}

// Bounded draw from mt19937_64 without std::uniform_int_distribution, whose
// output is not specified identically across standard library implementations.
inline std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
    return rng() % n;
}

} // namespace fina
