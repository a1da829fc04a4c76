#include <doctest.h>

#include "semiqm/money_private.hpp"

using namespace semiqm;
using namespace semiqm::money;

TEST_CASE("repetition count and keygen parameters") {
    CHECK(repetition_count(256) == 64);
    CHECK(repetition_count(2) == 1);
    CHECK_THROWS(repetition_count(1));

    Rng rng(41);
    MiniKey key = mini_keygen(2, rng);
    CHECK(key.n == 1);
    MiniKey key8 = mini_keygen(256, rng, 8, 12);
    CHECK(key8.n == 8);
    CHECK(key8.w == 12);
    CHECK(static_cast<int>(key8.puzzles.size()) == 8);
    CHECK(static_cast<int>(key8.verkeys.size()) == 8);
    // An explicit n wins regardless of lambda.
    CHECK(mini_keygen(1, rng, 8, 12).n == 8);
}

TEST_CASE("honest mini mint and verify") {
    Rng bank_rng(42), user_rng(43);
    MiniKey key = mini_keygen(256, bank_rng, 8, 16);
    MiniBanknote note = mini_mint(key, user_rng);
    CHECK(note.n == 8);
    CHECK(note.obligations.size() == 8);
    CHECK(primitives::mac_verify(key.mac_key, obligations_message(note.obligations), note.tag));
    for (const auto& s : note.states) CHECK(!s.consumed());

    VerifyTranscript transcript;
    CHECK(mini_cverify(key, note, bank_rng, user_rng, &transcript));
    CHECK(transcript.result);
    for (const auto& s : note.states) CHECK(s.consumed());

    // Two mints under one key commit to different obligations.
    Rng u2(44);
    MiniBanknote note2 = mini_mint(key, u2);
    CHECK(note.obligations != note2.obligations);
}

TEST_CASE("mint aborts on wrong arity before issuing a tag") {
    Rng bank_rng(45), user_rng(46);
    MiniKey key = mini_keygen(256, bank_rng, 4, 12);
    MiniMintBank bank(key);
    MiniMintUser user;
    wire::ObligationsBody obligations = user.on_puzzles(bank.puzzles(), user_rng);
    obligations.obligations.pop_back();
    CHECK_THROWS_AS(bank.on_obligations(obligations), wire::ProtocolError);

    // Out-of-order messages abort too.
    MiniMintBank bank2(key);
    wire::ObligationsBody empty;
    empty.w = 12;
    CHECK_THROWS_AS(bank2.on_obligations(empty), wire::ProtocolError);
}

TEST_CASE("replay acceptance equals challenge-vector collision, exactly") {
    Rng bank_rng(47), user_rng(48);
    MiniKey key = mini_keygen(256, bank_rng, 4, 16);
    int collisions = 0, accepts = 0;
    const int trials = 600;
    for (int t = 0; t < trials; ++t) {
        MiniBanknote note = mini_mint(key, user_rng);
        VerifyTranscript first;
        bool r1 = mini_cverify(key, note, bank_rng, user_rng, &first);
        if (!r1) continue;  // d = 0 burn, irrelevant here

        MiniVerifyBank second(key);
        wire::ChallengeBody challenge = second.challenge(bank_rng);
        wire::AnswersBody replay;
        replay.w = note.w;
        replay.obligations = first.obligations;
        replay.tag = first.tag;
        replay.answers = first.answers;
        bool accepted = second.on_answers(replay);
        bool collided = challenge.bits == first.challenge;
        CHECK(accepted == collided);
        if (collided) ++collisions;
        if (accepted) ++accepts;
    }
    // n = 4: collisions happen at rate 1/16, so both sides get exercised.
    CHECK(collisions > 10);
    CHECK(accepts == collisions);
}

TEST_CASE("the obligation tag binds the obligation vector") {
    Rng bank_rng(49), user_rng(50);
    MiniKey key = mini_keygen(256, bank_rng, 4, 16);
    MiniBanknote note = mini_mint(key, user_rng);

    MiniVerifyBank bank(key);
    MiniVerifyUser user(note);
    wire::AnswersBody answers = user.on_challenge(bank.challenge(bank_rng), user_rng);
    answers.obligations[2].image.y = answers.obligations[2].image.y ^ qsim::BitVec(1, 16);
    CHECK(!bank.on_answers(answers));
}

TEST_CASE("mini key canonical encoding round-trips and rejects junk") {
    Rng rng(51);
    MiniKey key = mini_keygen(256, rng, 6, 14);
    Bytes encoded = encode_mini_key(key);
    auto decoded = decode_mini_key(encoded);
    REQUIRE(decoded.has_value());
    CHECK(decoded->n == key.n);
    CHECK(decoded->w == key.w);
    CHECK(decoded->mac_key == key.mac_key);
    for (int i = 0; i < key.n; ++i) {
        CHECK(decoded->puzzles[i] == key.puzzles[i]);
        CHECK(decoded->verkeys[i] == key.verkeys[i]);
    }

    CHECK(!decode_mini_key(Bytes{}).has_value());
    Bytes truncated(encoded.begin(), encoded.end() - 3);
    CHECK(!decode_mini_key(truncated).has_value());
    Bytes padded = encoded;
    padded.push_back(0);
    CHECK(!decode_mini_key(padded).has_value());
    Bytes bad_version = encoded;
    bad_version[4] = 99;
    CHECK(!decode_mini_key(bad_version).has_value());
}

TEST_CASE("full scheme lifecycle, tamper rejection, and undecodable keys") {
    Rng bank_rng(52), user_rng(53);
    FullKey key = full_keygen(bank_rng);
    CHECK(key.mac_key.bytes != key.enc_key.bytes);

    FullBanknote note = full_mint(key, 256, bank_rng, user_rng, 6, 16);
    CHECK(note.note.n == 6);
    FullBanknote copy = note;

    CHECK(full_cverify(key, note, bank_rng, user_rng));

    // Single-bit ciphertext tamper dies at the MAC check, before a challenge.
    FullVerifyBank bank(key);
    wire::VerifyInitBody init{copy.wrapped_key, copy.wrapped_tag};
    init.wrapped_key.body[0] ^= 1;
    auto outcome = bank.on_init(init, bank_rng);
    REQUIRE(std::holds_alternative<wire::ResultBody>(outcome));
    CHECK(!std::get<wire::ResultBody>(outcome).accepted);

    // A valid MAC over an undecodable ciphertext is rejected, not crashed.
    primitives::Ciphertext garbage;
    garbage.nonce = user_rng.bytes<16>();
    garbage.body = Bytes(13, 0x5a);
    primitives::Tag tag = primitives::mac_tag(key.mac_key, garbage.serialize());
    FullVerifyBank bank2(key);
    auto outcome2 = bank2.on_init(wire::VerifyInitBody{garbage, tag}, bank_rng);
    REQUIRE(std::holds_alternative<wire::ResultBody>(outcome2));
    CHECK(!std::get<wire::ResultBody>(outcome2).accepted);

    // Full-note replay: the recorded answers only pass on challenge collision.
    Rng br(54), ur(55);
    int accepts = 0;
    const int trials = 400;
    for (int t = 0; t < trials; ++t) {
        FullBanknote n2 = full_mint(key, 256, br, ur, 4, 16);
        VerifyTranscript first;
        if (!full_cverify(key, n2, br, ur, &first)) continue;
        FullVerifyBank replay_bank(key);
        auto first_msg =
            replay_bank.on_init(wire::VerifyInitBody{n2.wrapped_key, n2.wrapped_tag}, br);
        REQUIRE(std::holds_alternative<wire::ChallengeBody>(first_msg));
        auto challenge = std::get<wire::ChallengeBody>(first_msg);
        wire::AnswersBody replay;
        replay.w = n2.note.w;
        replay.obligations = first.obligations;
        replay.tag = first.tag;
        replay.answers = first.answers;
        bool accepted = replay_bank.on_answers(replay);
        CHECK(accepted == (challenge.bits == first.challenge));
        if (accepted) ++accepts;
    }
    // Collision rate 1/16 at n=4: mean 25 over 400 trials.
    CHECK(accepts > 5);
    CHECK(accepts < 60);
}

TEST_CASE("full keygen is seed-deterministic with independent keys") {
    Rng a(200), b(200);
    FullKey k1 = full_keygen(a);
    FullKey k2 = full_keygen(b);
    CHECK(k1.mac_key == k2.mac_key);
    CHECK(k1.enc_key == k2.enc_key);
    CHECK(k1.mac_key.bytes != k1.enc_key.bytes);
}

TEST_CASE("each full note wraps an independent mini key") {
    Rng bank_rng(201), u1(202), u2(203);
    FullKey key = full_keygen(bank_rng);
    FullBanknote n1 = full_mint(key, 256, bank_rng, u1, 4, 12);
    FullBanknote n2 = full_mint(key, 256, bank_rng, u2, 4, 12);
    CHECK(n1.wrapped_key.serialize() != n2.wrapped_key.serialize());
    CHECK(!(n1.wrapped_tag == n2.wrapped_tag));
    // The decrypted keys really are different mini keys.
    Bytes p1 = primitives::decrypt(key.enc_key, n1.wrapped_key);
    Bytes p2 = primitives::decrypt(key.enc_key, n2.wrapped_key);
    CHECK(p1 != p2);
}

TEST_CASE("mini key and note size grow linearly in n") {
    Rng rng(204);
    // Canonical encoding: version field (5) + dims (12) + mac (36) + 36 per
    // puzzle.
    for (int n : {1, 4, 16}) {
        MiniKey key = mini_keygen(256, rng, n, 16);
        CHECK(encode_mini_key(key).size() == static_cast<size_t>(53 + 36 * n));
    }
}

TEST_CASE("the verification decision is a pure function of its inputs") {
    Rng keys_rng(205);
    MiniKey key = mini_keygen(256, keys_rng, 6, 16);
    Rng user_rng(206);
    MiniBanknote note = mini_mint(key, user_rng);

    // Same key, same challenge randomness, same answers: same decision, any
    // number of times.
    Rng challenge_a(207), challenge_b(207);
    MiniVerifyBank bank_a(key), bank_b(key);
    wire::ChallengeBody ca = bank_a.challenge(challenge_a);
    wire::ChallengeBody cb = bank_b.challenge(challenge_b);
    CHECK(ca.bits == cb.bits);
    MiniVerifyUser user(note);
    wire::AnswersBody answers = user.on_challenge(ca, user_rng);
    CHECK(bank_a.on_answers(answers) == bank_b.on_answers(answers));
}

TEST_CASE("a d = 0 equation measurement burns the note") {
    // At w=2 each equation challenge measures d = 0 with probability 1/4, so
    // a burn shows up within a few seeds.
    bool burned_seen = false;
    for (uint64_t seed = 0; seed < 64 && !burned_seen; ++seed) {
        Rng bank_rng(seed), user_rng(seed + 1000);
        MiniKey key = mini_keygen(256, bank_rng, 4, 2);
        MiniBanknote note = mini_mint(key, user_rng);
        MiniVerifyBank bank(key);
        MiniVerifyUser user(note);
        wire::AnswersBody answers = user.on_challenge(bank.challenge(bank_rng), user_rng);
        bool accepted = bank.on_answers(answers);
        if (user.burned()) {
            burned_seen = true;
            CHECK(!accepted);
        }
    }
    CHECK(burned_seen);
}
