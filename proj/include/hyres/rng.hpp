#ifndef HYRES_RNG_HPP
#define HYRES_RNG_HPP

#include <cmath>
#include <cstdint>

namespace hyres {

// Counter-based generator: every draw is a pure function of (seed, stream,
// counter), so noise fields are bit-reproducible regardless of evaluation
// order or platform. Mixing function is the splitmix64 finalizer.
namespace rng {

inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t hash3(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    return mix64(mix64(mix64(seed) ^ stream) ^ counter);
}

/// Uniform in (0,1]; never returns 0 so it is safe inside log().
inline double uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    const std::uint64_t bits = hash3(seed, stream, counter) >> 11; // 53 bits
    return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
}

/// Standard normal via Box-Muller (cosine branch).
inline double normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    const double u1 = uniform(seed, stream, 2 * counter);
    const double u2 = uniform(seed, stream, 2 * counter + 1);
    constexpr double two_pi = 6.283185307179586476925286766559;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

/// Uniform integer in [0, n) for seeded shuffles and subset picks.
inline std::uint64_t below(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter,
                           std::uint64_t n) {
    return hash3(seed, stream, counter) % n;
}

} // namespace rng

} // namespace hyres

#endif
