#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace semiqm {

// Seedable randomness source. Everything that needs randomness takes one of
// these by reference, which keeps protocol runs and game trials replayable.
// mt19937_64 output is fully specified by the standard, so seeded transcripts
// are identical across platforms.
class Rng {
public:
    explicit Rng(uint64_t seed) : gen_(seed) {}

    // Independent stream for trial `index` of a seeded run.
    static Rng derive(uint64_t seed, uint64_t index);

    uint64_t next_u64() { return gen_(); }

    int bit() { return static_cast<int>(next_u64() & 1u); }

    // Uniform in [0, bound), bound > 0. Rejection-sampled, no modulo bias.
    uint64_t below(uint64_t bound);

    void fill(std::span<uint8_t> out);

    template <size_t N>
    std::array<uint8_t, N> bytes() {
        std::array<uint8_t, N> out;
        fill(out);
        return out;
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace semiqm
