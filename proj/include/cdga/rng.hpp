#pragma once

#include <cstdint>

namespace cdga {

// SplitMix64: tiny deterministic generator used for reproducible randomized
// checks.  Fixed here (rather than std::mt19937) so that seeded reports are
// byte-identical across platforms and standard-library versions.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform value in [0, bound); bound must be positive.
    std::uint64_t below(std::uint64_t bound) { return next() % bound; }

    // Uniform integer in [lo, hi] inclusive.
    long long range(long long lo, long long hi) {
        return lo + static_cast<long long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

private:
    std::uint64_t state_;
};

// Independent stream for one trial of a seeded suite, so that trials are
// insensitive to how much randomness earlier trials consumed.
inline SplitMix64 trial_rng(std::uint64_t seed, std::uint64_t trial) {
    SplitMix64 mix(seed);
    std::uint64_t a = mix.next();
    return SplitMix64(a ^ (0x9E3779B97F4A7C15ULL * (trial + 1)));
}

}  // namespace cdga
