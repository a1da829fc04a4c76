#pragma once

// Trapdoor side of the claw-free family. Only bank, referee, and honest state
// preparation code may include this header; the adversary surface audit fails
// the build if it ever becomes reachable from strategy code.
#define SEMIQM_NTCF_TRAPDOOR_INCLUDED 1

#include <utility>

#include "semiqm/ntcf.hpp"
#include "semiqm/rng.hpp"

namespace semiqm::ntcf {

struct Trapdoor {
    int width = 0;
    qsim::BitVec shift;                // nonzero; x0 ^ x1 for every claw
    std::array<uint8_t, 32> perm_key{};

    bool operator==(const Trapdoor&) const = default;
};

// Fresh key with uniformly random permutation material; the derived shift is
// resampled until nonzero.
std::pair<FunctionKey, Trapdoor> keygen_f(int width, Rng& rng);

// The unique x with f_{k,b}(x) = y. Total here: P is a bijection, so every y
// has exactly one preimage per branch.
qsim::BitVec invert(const Trapdoor& t, int b, const Image& y);

// Both preimages of y: (invert(t,0,y), invert(t,1,y)). Physics hook for honest
// claw-state preparation and for game referees only.
std::pair<qsim::BitVec, qsim::BitVec> claw_of(const Trapdoor& t, const Image& y);

// Membership in G_{k,b,x}; this instantiation excludes only the zero string.
bool good_set_member(const Trapdoor& t, int b, const qsim::BitVec& x, const qsim::BitVec& d);

enum class HardcoreClass { InH, InHBar, Neither };

// Classifies an equation tuple (b, x, d, c) against the hardcore sets: InH when
// d is in both good sets and c = d.(x0 ^ x1), InHBar with c flipped, Neither
// when d is outside the good sets.
HardcoreClass hardcore_member(const Trapdoor& t, int b, const qsim::BitVec& x,
                              const qsim::BitVec& d, int c);

namespace detail {
// Trapdoor reconstructed from key material. Exists so honest obligation
// preparation can sample claw states from the key the bank published.
Trapdoor trapdoor_view(const FunctionKey& k);
}  // namespace detail

}  // namespace semiqm::ntcf
