#pragma once

#include "semiqm/wire.hpp"

// User/wallet half of the private money protocols. Mint is three messages
// (puzzles in, obligations out, tag in); verification is one round (challenge
// in, answers out). The claw states never leave the wallet; on verification
// they are measured, which consumes them whatever the bank decides.
namespace semiqm::money {

struct MiniBanknote {
    int n = 0;
    int w = 0;
    puzzles::ObligationVector obligations;
    primitives::Tag tag;
    std::vector<qsim::ClawState> states;
};

struct FullBanknote {
    primitives::Ciphertext wrapped_key;
    primitives::Tag wrapped_tag;
    MiniBanknote note;
};

// Verbatim record of one verification run, for replay and audit tests.
struct VerifyTranscript {
    puzzles::ChallengeVector challenge;
    puzzles::AnswerVector answers;
    puzzles::ObligationVector obligations;
    primitives::Tag tag;
    bool result = false;
};

// Canonical byte string the obligation tag covers: one length-prefixed field
// per obligation, in order.
Bytes obligations_message(const puzzles::ObligationVector& obligations);

class MiniMintUser {
public:
    wire::ObligationsBody on_puzzles(const wire::PuzzlesBody& body, Rng& rng);
    MiniBanknote on_tag(const primitives::Tag& tag);

private:
    int stage_ = 0;
    int n_ = 0, w_ = 0;
    puzzles::ObligationVector obligations_;
    std::vector<qsim::ClawState> states_;
};

class MiniVerifyUser {
public:
    explicit MiniVerifyUser(MiniBanknote& note) : note_(note) {}

    wire::AnswersBody on_challenge(const wire::ChallengeBody& body, Rng& rng);
    void on_result(bool accepted);

    // True once some equation challenge measured d = 0: the answers cannot
    // verify and there is no way to re-measure. Surfaced as NOTE_BURNED.
    bool burned() const { return burned_; }
    const VerifyTranscript& transcript() const { return transcript_; }

private:
    MiniBanknote& note_;
    VerifyTranscript transcript_;
    int stage_ = 0;
    bool burned_ = false;
};

class FullMintUser {
public:
    wire::ObligationsBody on_puzzles(const wire::PuzzlesBody& body, Rng& rng);
    FullBanknote on_tag_note(const wire::TagNoteBody& body);

private:
    MiniMintUser mini_;
};

class FullVerifyUser {
public:
    explicit FullVerifyUser(FullBanknote& note) : note_(note), mini_(note.note) {}

    wire::VerifyInitBody init() const;
    wire::AnswersBody on_challenge(const wire::ChallengeBody& body, Rng& rng);
    void on_result(bool accepted) { mini_.on_result(accepted); }
    bool burned() const { return mini_.burned(); }
    const VerifyTranscript& transcript() const { return mini_.transcript(); }

private:
    FullBanknote& note_;
    MiniVerifyUser mini_;
};

}  // namespace semiqm::money
