// rng.hpp — one seeded 64-bit generator; sub-streams are derived by hashing
// so parallel members stay reproducible.
#pragma once

#include <cstdint>

namespace mfa {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed) {}

    static Rng substream(std::uint64_t seed, std::uint64_t index) {
        std::uint64_t s = seed ^ (0x9e3779b97f4a7c15ULL * (index + 1));
        splitmix64(s);
        return Rng(s);
    }

    std::uint64_t next_u64() { return splitmix64(state); }

    // uniform in [0,1) with 53 random bits
    double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

    // uniform integer in [0, bound)
    std::uint64_t next_below(std::uint64_t bound) {
        return bound == 0 ? 0 : next_u64() % bound;
    }
};

} // namespace mfa
