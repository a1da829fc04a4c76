#pragma once

// Bank half of the private money schemes: the mini scheme keyed by n puzzle
// pairs plus a MAC key, and the full scheme that wraps a fresh mini key into
// every note (encrypt-then-MAC) so the bank's own key never grows.
//
// The bank is memoryless across runs: a session object holds at most the
// challenge it just issued and is discarded when the session ends. Every
// verification decision is a pure function of (key, challenge, user messages).
#define SEMIQM_MONEY_BANK_INCLUDED 1

#include <optional>
#include <variant>

#include "semiqm/money_user.hpp"
#include "semiqm/puzzles_verify.hpp"

namespace semiqm::money {

struct MiniKey {
    int n = 0;
    int w = 0;
    puzzles::PuzzleVector puzzles;
    puzzles::VerKeyVector verkeys;
    primitives::MacKey mac_key;
};

// n = ceil(log2(lambda)^2) unless overridden.
int repetition_count(int lambda);

inline constexpr int kDefaultWidth = 16;

MiniKey mini_keygen(int lambda, Rng& rng, std::optional<int> n_override = {},
                    std::optional<int> w_override = {});

// Versioned, length-prefixed, byte-exact encoding; the full scheme encrypts
// exactly these bytes. decode returns nullopt on anything malformed, since the
// ciphertext under inspection may be adversarial.
Bytes encode_mini_key(const MiniKey& key);
std::optional<MiniKey> decode_mini_key(std::span<const uint8_t> data);

struct FullKey {
    primitives::MacKey mac_key;
    primitives::EncKey enc_key;
};

FullKey full_keygen(Rng& rng);

class MiniMintBank {
public:
    explicit MiniMintBank(MiniKey key) : key_(std::move(key)) {}

    wire::PuzzlesBody puzzles();
    // Checks arity and width, tags the obligations. Violations abort the
    // session before any tag is issued.
    primitives::Tag on_obligations(const wire::ObligationsBody& body);

    const MiniKey& key() const { return key_; }

private:
    MiniKey key_;
    int stage_ = 0;
};

class MiniVerifyBank {
public:
    explicit MiniVerifyBank(MiniKey key) : key_(std::move(key)) {}

    wire::ChallengeBody challenge(Rng& rng);
    // Total over adversarial input: any malformed answer set verifies false.
    bool on_answers(const wire::AnswersBody& body);

private:
    MiniKey key_;
    puzzles::ChallengeVector bits_;
    int stage_ = 0;
};

class FullMintBank {
public:
    FullMintBank(const FullKey& key, int lambda, Rng& rng, std::optional<int> n_override = {},
                 std::optional<int> w_override = {});

    wire::PuzzlesBody puzzles() { return mint_.puzzles(); }
    wire::TagNoteBody on_obligations(const wire::ObligationsBody& body);

private:
    MiniMintBank mint_;
    primitives::Ciphertext wrapped_key_;
    primitives::Tag wrapped_tag_;
};

class FullVerifyBank {
public:
    explicit FullVerifyBank(const FullKey& key) : key_(key) {}

    // MAC failure or an undecodable mini key rejects immediately; otherwise
    // the nested mini verification starts with a challenge.
    std::variant<wire::ResultBody, wire::ChallengeBody> on_init(const wire::VerifyInitBody& body,
                                                                Rng& rng);
    bool on_answers(const wire::AnswersBody& body);

private:
    FullKey key_;
    std::optional<MiniVerifyBank> mini_;
    int stage_ = 0;
};

// In-process drivers pairing the two state machines, for tests and games.
MiniBanknote mini_mint(const MiniKey& key, Rng& user_rng);
bool mini_cverify(const MiniKey& key, MiniBanknote& note, Rng& bank_rng, Rng& user_rng,
                  VerifyTranscript* transcript = nullptr);
FullBanknote full_mint(const FullKey& key, int lambda, Rng& bank_rng, Rng& user_rng,
                       std::optional<int> n_override = {}, std::optional<int> w_override = {});
bool full_cverify(const FullKey& key, FullBanknote& note, Rng& bank_rng, Rng& user_rng,
                  VerifyTranscript* transcript = nullptr);

}  // namespace semiqm::money
