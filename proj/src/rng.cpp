#include "semiqm/rng.hpp"

#include <stdexcept>

namespace semiqm {

static uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

Rng Rng::derive(uint64_t seed, uint64_t index) {
    return Rng(splitmix64(seed ^ splitmix64(index + 0x51ed2701)));
}

uint64_t Rng::below(uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("below(0)");
    // Largest multiple of bound that fits in 64 bits; reject above it.
    uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    uint64_t v;
    do {
        v = next_u64();
    } while (v >= limit);
    return v % bound;
}

void Rng::fill(std::span<uint8_t> out) {
    size_t i = 0;
    while (i < out.size()) {
        uint64_t v = next_u64();
        for (int j = 0; j < 8 && i < out.size(); ++j, ++i) {
            out[i] = static_cast<uint8_t>(v >> (8 * j));
        }
    }
}

}  // namespace semiqm
