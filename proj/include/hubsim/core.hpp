#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hubsim {

// Error taxonomy. Everything user-facing derives from Error so the CLI can
// map failures to exit codes without enumerating causes.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad arguments or precondition violations (wrong ranges, missing state).
struct DomainError : Error {
    using Error::Error;
};

// A weight evaluated to a nonpositive value where a positive one is required.
struct PositivityError : Error {
    using Error::Error;
};

// A weight table (or evaluated kind) failed the convexity check.
struct ConvexityError : Error {
    using Error::Error;
};

// Chord through degree 1 and degree A is flat: W(A) == W(1).
struct FlatChordError : Error {
    using Error::Error;
};

// The weight never exceeded W(1) within the search cap, so it cannot be
// unbounded as far as we can tell.
struct UnboundedSearchError : Error {
    using Error::Error;
};

// SplitMix64. Used only to derive seeds for the main engines.
struct SplitMix64 {
    uint64_t state;

    explicit SplitMix64(uint64_t s) : state(s) {}

    static uint64_t mix(uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    uint64_t next() {
        state += 0x9e3779b97f4a7c15ULL;
        return mix(state);
    }
};

// Per-trial stream seed derived from (master seed, stream index). Streams are
// independent of each other and of how work is divided among threads.
inline uint64_t stream_seed(uint64_t master, uint64_t stream) {
    return SplitMix64::mix(master + 0x9e3779b97f4a7c15ULL * (stream + 1));
}

// xoshiro256++ by Blackman and Vigna. Chosen over std engines because its
// output is reproducible bit for bit across platforms and it vectorizes.
struct Xoshiro256pp {
    uint64_t s[4];

    static uint64_t rotl(uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    static Xoshiro256pp seeded(uint64_t seed) {
        SplitMix64 sm(seed);
        Xoshiro256pp g;
        for (auto& w : g.s) w = sm.next();
        return g;
    }

    uint64_t next() {
        const uint64_t result = rotl(s[0] + s[3], 23) + s[0];
        const uint64_t t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = rotl(s[3], 45);
        return result;
    }
};

// Uniform double in [0, 1) from the top 52 bits. One definition everywhere:
// exact in both scalar code and the AVX2 kernels (which lack a native
// u64 -> double convert), so lanes reproduce the scalar walk bit for bit.
inline double unit_double(uint64_t x) {
    return static_cast<double>(x >> 12) * 0x1.0p-52;
}

}  // namespace hubsim
