#pragma once

#include <cstdint>

namespace ctqw {

// SplitMix64 output function.  All randomness in the simulator flows through
// this mixer so that results are reproducible bit-for-bit across platforms;
// std::uniform_int_distribution is deliberately avoided (its mapping is
// implementation-defined).
inline std::uint64_t splitmix64_mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Per-trial seed: a keyed hash of (base_seed, trial_index).  Trials form
// independent streams regardless of how many run or in which order.
inline std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t trial_index) {
    return splitmix64_mix(splitmix64_mix(base_seed) ^ splitmix64_mix(trial_index * 0xd2b74407b1ce6e93ULL + 1));
}

// Counter-based stream: value i is a pure function of (seed, i).
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() { return splitmix64_mix(state_ += 0x9e3779b97f4a7c15ULL); }

    // Unbiased draw from [0, n) by rejection.
    std::uint64_t bounded(std::uint64_t n) {
        const std::uint64_t limit = ~0ULL - ~0ULL % n;
        std::uint64_t x;
        do {
            x = next();
        } while (x >= limit);
        return x % n;
    }

private:
    std::uint64_t state_;
};

}  // namespace ctqw
