#pragma once

#include <array>

#include "semiqm/qsim.hpp"

// Trapdoor claw-free function family, exact hidden-shift instantiation:
//
//   f_{k,b}(x) = P(x ^ b.s)
//
// where P is a keyed bijection over {0,1}^w (a 4-round Feistel network keyed by
// 32 bytes of material; unbalanced split for odd w) and the shift s is derived
// from the same key material. f_{k,0} and f_{k,1} are each bijections and share
// every image, so the pair is exactly 2-to-1 with claws (x, x ^ s).
//
// This header is the evaluation surface. Everything that requires the trapdoor
// (inversion, claw extraction, hardcore-set membership) lives in
// ntcf_trapdoor.hpp; adversary strategy code never includes that header.
//
// No claw-freeness is claimed for this instantiation: the repository tests
// protocol correctness and bounded adversary strategies, not computational
// hardness.
namespace semiqm::ntcf {

struct FunctionKey {
    int width = 0;
    std::array<uint8_t, 32> perm_key{};

    bool operator==(const FunctionKey&) const = default;
};

struct Image {
    qsim::BitVec y;

    bool operator==(const Image&) const = default;
};

Image eval(const FunctionKey& k, int b, const qsim::BitVec& x);

// True iff y == f_{k,b}(x).
bool check(const FunctionKey& k, int b, const qsim::BitVec& x, const Image& y);

}  // namespace semiqm::ntcf
