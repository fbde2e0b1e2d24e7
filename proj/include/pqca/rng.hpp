#pragma once

#include <cstdint>

namespace pqca {

// Counter-based pseudorandom generation: every draw is a pure function of
// (seed, stream, counters), so fault traces are reproducible and can be
// sampled from any worker without shared state.

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t mix(std::uint64_t seed, std::uint64_t a) {
    return splitmix64(splitmix64(seed) ^ a);
}

constexpr std::uint64_t mix(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return splitmix64(mix(seed, a) ^ splitmix64(b + 0x165667b19e3779f9ULL));
}

constexpr std::uint64_t mix(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                            std::uint64_t c) {
    return splitmix64(mix(seed, a, b) ^ splitmix64(c + 0x27d4eb2f165667c5ULL));
}

// Uniform in [0,1).
constexpr double uniform01(std::uint64_t h) {
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

// Bernoulli(p) from one hash value.
constexpr bool bernoulli(std::uint64_t h, double p) {
    return uniform01(h) < p;
}

}  // namespace pqca
