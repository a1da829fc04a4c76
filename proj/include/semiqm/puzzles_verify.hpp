#pragma once

// Generation and verification of 1-of-2 puzzles. Requires the trapdoor, so
// this header is bank/referee territory.
#define SEMIQM_PUZZLES_VERIFY_INCLUDED 1

#include "semiqm/ntcf_trapdoor.hpp"
#include "semiqm/puzzles.hpp"

namespace semiqm::puzzles {

struct VerKey {
    ntcf::Trapdoor trapdoor;

    bool operator==(const VerKey&) const = default;
};

using VerKeyVector = std::vector<VerKey>;

std::pair<Puzzle, VerKey> gen(int width, Rng& rng);
std::pair<PuzzleVector, VerKeyVector> gen_n(int n, int width, Rng& rng);

// Deterministic and total: any malformed answer (wrong kind, wrong width,
// d = 0) verifies false rather than erroring.
bool verify(const Puzzle& p, const VerKey& v, const Obligation& o, int b, const Answer& a);

// Both challenges against one obligation; the product of the two verifications.
bool verify2(const Puzzle& p, const VerKey& v, const Obligation& o, const Answer& a0,
             const Answer& a1);

// Shared-bit repetition: true iff every component verifies. Key/obligation
// vector length mismatches are caller bugs and throw; an answer vector of the
// wrong length is adversarial input and verifies false.
bool verify_n(const PuzzleVector& ps, const VerKeyVector& vs, const ObligationVector& os,
              int b, const AnswerVector& as);

// Per-component challenge bits.
bool verify_vec(const PuzzleVector& ps, const VerKeyVector& vs, const ObligationVector& os,
                const ChallengeVector& bs, const AnswerVector& as);

// The weakly verifiable view of the puzzle: a (generate, verify-both) pair.
// Same decision as verify2; named so the repetition games can be phrased
// against the weak-puzzle interface.
bool weakly_verifiable_view(const Puzzle& p, const VerKey& v, const Obligation& o,
                            const Answer& a0, const Answer& a1);

}  // namespace semiqm::puzzles
