#pragma once

#include <functional>
#include <optional>

#include "semiqm/money_user.hpp"

// Adversary-facing surface of the security games. A strategy drives the user
// side of mint/verify with full freedom to deviate: it sees protocol messages,
// may keep classical data and unconsumed claw states across sessions, and may
// interleave sessions. What it cannot reach -- by construction of this header's
// include set, checked by the surface audit -- is any trapdoor, verification
// key, bank key, or claw extraction hook.
namespace semiqm::games {

// Thrown by a port when a referee cap (mints or verifies) would be exceeded;
// the trial is voided.
struct TrialVoid {};

// Message-level port to a mini-scheme bank under referee supervision. Verify
// sessions may be opened concurrently: both challenges can be read before
// either answer is committed.
class MiniBankPort {
public:
    virtual ~MiniBankPort() = default;

    virtual wire::PuzzlesBody mint_begin() = 0;
    virtual primitives::Tag mint_finish(const wire::ObligationsBody& obligations) = 0;

    struct VerifySession {
        int sid = 0;
        wire::ChallengeBody challenge;
    };
    virtual VerifySession verify_begin() = 0;
    virtual bool verify_finish(int sid, const wire::AnswersBody& answers) = 0;
};

// Message-level port to a full-scheme bank.
class FullBankPort {
public:
    virtual ~FullBankPort() = default;

    struct MintSession {
        int sid = 0;
        wire::PuzzlesBody puzzles;
    };
    virtual MintSession mint_begin() = 0;
    virtual wire::TagNoteBody mint_finish(int sid, const wire::ObligationsBody& obligations) = 0;

    struct VerifySession {
        int sid = 0;
        // Absent when the bank rejected at init (bad wrapped key MAC).
        std::optional<wire::ChallengeBody> challenge;
    };
    virtual VerifySession verify_begin(const wire::VerifyInitBody& init) = 0;
    virtual bool verify_finish(int sid, const wire::AnswersBody& answers) = 0;
};

struct Solve2Output {
    puzzles::ObligationVector obligations;
    puzzles::AnswerVector preimage_answers;
    puzzles::AnswerVector equation_answers;
};

using Solve2Strategy = std::function<Solve2Output(const puzzles::PuzzleVector&, Rng&)>;
using MiniStrategy = std::function<void(MiniBankPort&, Rng&)>;
using FullStrategy = std::function<void(FullBankPort&, Rng&)>;

// Hadamard-measuring a standard-basis state yields a uniform label, so a
// fabricated equation answer is just a uniform (i, d) pair.
puzzles::Answer fabricate_equation(int w, Rng& rng);

}  // namespace semiqm::games
