#include "semiqm/money_private.hpp"

#include <cmath>

namespace semiqm::money {

Bytes obligations_message(const puzzles::ObligationVector& obligations) {
    primitives::CanonicalWriter w;
    for (const auto& o : obligations) w.field(o.image.y.pack());
    return w.take();
}

// ---- user side ----

wire::ObligationsBody MiniMintUser::on_puzzles(const wire::PuzzlesBody& body, Rng& rng) {
    if (stage_ != 0) throw wire::ProtocolError("mint: puzzles out of order");
    if (body.n < 1 || static_cast<int>(body.keys.size()) != body.n) {
        throw wire::ProtocolError("mint: puzzle count mismatch");
    }
    stage_ = 1;
    n_ = body.n;
    w_ = body.w;
    wire::ObligationsBody out;
    out.w = w_;
    for (const auto& key : body.keys) {
        auto [o, state] = puzzles::obligate(puzzles::Puzzle{key}, rng);
        out.obligations.push_back(o);
        states_.push_back(std::move(state));
    }
    obligations_ = out.obligations;
    return out;
}

MiniBanknote MiniMintUser::on_tag(const primitives::Tag& tag) {
    if (stage_ != 1) throw wire::ProtocolError("mint: tag out of order");
    stage_ = 2;
    MiniBanknote note;
    note.n = n_;
    note.w = w_;
    note.obligations = std::move(obligations_);
    note.tag = tag;
    note.states = std::move(states_);
    return note;
}

wire::AnswersBody MiniVerifyUser::on_challenge(const wire::ChallengeBody& body, Rng& rng) {
    if (stage_ != 0) throw wire::ProtocolError("verify: challenge out of order");
    if (static_cast<int>(body.bits.size()) != note_.n) {
        throw wire::ProtocolError("verify: challenge arity mismatch");
    }
    stage_ = 1;
    wire::AnswersBody out;
    out.w = note_.w;
    out.obligations = note_.obligations;
    out.tag = note_.tag;
    for (int i = 0; i < note_.n; ++i) {
        int b = body.bits[i] & 1;
        puzzles::Answer a =
            puzzles::solve(puzzles::Puzzle{}, note_.obligations[i], note_.states[i], b, rng);
        if (b == 1 && a.payload.is_zero()) burned_ = true;
        out.answers.push_back(a);
    }
    transcript_.challenge = body.bits;
    transcript_.answers = out.answers;
    transcript_.obligations = out.obligations;
    transcript_.tag = out.tag;
    return out;
}

void MiniVerifyUser::on_result(bool accepted) {
    transcript_.result = accepted;
}

wire::ObligationsBody FullMintUser::on_puzzles(const wire::PuzzlesBody& body, Rng& rng) {
    return mini_.on_puzzles(body, rng);
}

FullBanknote FullMintUser::on_tag_note(const wire::TagNoteBody& body) {
    FullBanknote note;
    note.note = mini_.on_tag(body.tag);
    note.wrapped_key = body.wrapped_key;
    note.wrapped_tag = body.wrapped_tag;
    return note;
}

wire::VerifyInitBody FullVerifyUser::init() const {
    return wire::VerifyInitBody{note_.wrapped_key, note_.wrapped_tag};
}

wire::AnswersBody FullVerifyUser::on_challenge(const wire::ChallengeBody& body, Rng& rng) {
    return mini_.on_challenge(body, rng);
}

// ---- bank side ----

int repetition_count(int lambda) {
    if (lambda < 2) throw std::invalid_argument("lambda too small");
    double lg = std::log2(static_cast<double>(lambda));
    return static_cast<int>(std::ceil(lg * lg));
}

MiniKey mini_keygen(int lambda, Rng& rng, std::optional<int> n_override,
                    std::optional<int> w_override) {
    MiniKey key;
    key.n = n_override ? *n_override : repetition_count(lambda);
    key.w = w_override.value_or(kDefaultWidth);
    if (key.n < 1) throw std::invalid_argument("n must be positive");
    auto [ps, vs] = puzzles::gen_n(key.n, key.w, rng);
    key.puzzles = std::move(ps);
    key.verkeys = std::move(vs);
    key.mac_key = primitives::mac_keygen(rng);
    return key;
}

namespace {
constexpr uint8_t kMiniKeyVersion = 1;
}

Bytes encode_mini_key(const MiniKey& key) {
    primitives::CanonicalWriter w;
    w.field(std::array<uint8_t, 1>{kMiniKeyVersion});
    Bytes dims;
    append_u32_be(dims, static_cast<uint32_t>(key.n));
    append_u32_be(dims, static_cast<uint32_t>(key.w));
    w.field(dims);
    w.field(key.mac_key.bytes);
    for (const auto& p : key.puzzles) w.field(p.key.perm_key);
    return w.take();
}

std::optional<MiniKey> decode_mini_key(std::span<const uint8_t> data) {
    primitives::CanonicalReader r(data);
    auto version = r.field();
    if (!version || version->size() != 1 || (*version)[0] != kMiniKeyVersion) return std::nullopt;
    auto dims = r.field();
    if (!dims || dims->size() != 8) return std::nullopt;
    uint32_t n = 0, w = 0;
    for (int j = 0; j < 4; ++j) n = n << 8 | (*dims)[j];
    for (int j = 4; j < 8; ++j) w = w << 8 | (*dims)[j];
    if (n < 1 || n > (1u << 20) || w < 2 || w > 64) return std::nullopt;
    MiniKey key;
    key.n = static_cast<int>(n);
    key.w = static_cast<int>(w);
    auto mac = r.field();
    if (!mac || mac->size() != 32) return std::nullopt;
    std::copy(mac->begin(), mac->end(), key.mac_key.bytes.begin());
    for (uint32_t i = 0; i < n; ++i) {
        auto perm = r.field();
        if (!perm || perm->size() != 32) return std::nullopt;
        ntcf::FunctionKey fk;
        fk.width = key.w;
        std::copy(perm->begin(), perm->end(), fk.perm_key.begin());
        key.puzzles.push_back(puzzles::Puzzle{fk});
        key.verkeys.push_back(puzzles::VerKey{ntcf::detail::trapdoor_view(fk)});
    }
    if (!r.done()) return std::nullopt;
    return key;
}

FullKey full_keygen(Rng& rng) {
    FullKey key;
    key.mac_key = primitives::mac_keygen(rng);
    key.enc_key = primitives::enc_keygen(rng);
    return key;
}

wire::PuzzlesBody MiniMintBank::puzzles() {
    if (stage_ != 0) throw wire::ProtocolError("mint: puzzles already sent");
    stage_ = 1;
    wire::PuzzlesBody body;
    body.n = key_.n;
    body.w = key_.w;
    for (const auto& p : key_.puzzles) body.keys.push_back(p.key);
    return body;
}

primitives::Tag MiniMintBank::on_obligations(const wire::ObligationsBody& body) {
    if (stage_ != 1) throw wire::ProtocolError("mint: obligations out of order");
    stage_ = 2;
    if (static_cast<int>(body.obligations.size()) != key_.n || body.w != key_.w) {
        throw wire::ProtocolError("mint: obligation arity or width mismatch");
    }
    return primitives::mac_tag(key_.mac_key, obligations_message(body.obligations));
}

wire::ChallengeBody MiniVerifyBank::challenge(Rng& rng) {
    if (stage_ != 0) throw wire::ProtocolError("verify: challenge already sent");
    stage_ = 1;
    bits_.resize(key_.n);
    for (auto& b : bits_) b = static_cast<uint8_t>(rng.bit());
    return wire::ChallengeBody{bits_};
}

bool MiniVerifyBank::on_answers(const wire::AnswersBody& body) {
    if (stage_ != 1) throw wire::ProtocolError("verify: answers out of order");
    stage_ = 2;
    if (!primitives::mac_verify(key_.mac_key, obligations_message(body.obligations), body.tag)) {
        return false;
    }
    if (body.w != key_.w || static_cast<int>(body.obligations.size()) != key_.n ||
        static_cast<int>(body.answers.size()) != key_.n) {
        return false;
    }
    return puzzles::verify_vec(key_.puzzles, key_.verkeys, body.obligations, bits_, body.answers);
}

FullMintBank::FullMintBank(const FullKey& key, int lambda, Rng& rng,
                           std::optional<int> n_override, std::optional<int> w_override)
    : mint_(mini_keygen(lambda, rng, n_override, w_override)) {
    wrapped_key_ = primitives::encrypt(key.enc_key, encode_mini_key(mint_.key()), rng);
    wrapped_tag_ = primitives::mac_tag(key.mac_key, wrapped_key_.serialize());
}

wire::TagNoteBody FullMintBank::on_obligations(const wire::ObligationsBody& body) {
    wire::TagNoteBody out;
    out.tag = mint_.on_obligations(body);
    out.wrapped_key = wrapped_key_;
    out.wrapped_tag = wrapped_tag_;
    return out;
}

std::variant<wire::ResultBody, wire::ChallengeBody> FullVerifyBank::on_init(
    const wire::VerifyInitBody& body, Rng& rng) {
    if (stage_ != 0) throw wire::ProtocolError("verify: init out of order");
    stage_ = 1;
    if (!primitives::mac_verify(key_.mac_key, body.wrapped_key.serialize(), body.wrapped_tag)) {
        stage_ = 3;
        return wire::ResultBody{false, "REJECTED"};
    }
    Bytes plain = primitives::decrypt(key_.enc_key, body.wrapped_key);
    std::optional<MiniKey> note_key = decode_mini_key(plain);
    if (!note_key) {
        stage_ = 3;
        return wire::ResultBody{false, "REJECTED"};
    }
    mini_.emplace(std::move(*note_key));
    stage_ = 2;
    return mini_->challenge(rng);
}

bool FullVerifyBank::on_answers(const wire::AnswersBody& body) {
    if (stage_ != 2 || !mini_) throw wire::ProtocolError("verify: answers out of order");
    stage_ = 3;
    return mini_->on_answers(body);
}

// ---- in-process drivers ----

MiniBanknote mini_mint(const MiniKey& key, Rng& user_rng) {
    MiniMintBank bank(key);
    MiniMintUser user;
    wire::ObligationsBody obligations = user.on_puzzles(bank.puzzles(), user_rng);
    return user.on_tag(bank.on_obligations(obligations));
}

bool mini_cverify(const MiniKey& key, MiniBanknote& note, Rng& bank_rng, Rng& user_rng,
                  VerifyTranscript* transcript) {
    MiniVerifyBank bank(key);
    MiniVerifyUser user(note);
    wire::AnswersBody answers = user.on_challenge(bank.challenge(bank_rng), user_rng);
    bool r = bank.on_answers(answers);
    user.on_result(r);
    if (transcript) *transcript = user.transcript();
    return r;
}

FullBanknote full_mint(const FullKey& key, int lambda, Rng& bank_rng, Rng& user_rng,
                       std::optional<int> n_override, std::optional<int> w_override) {
    FullMintBank bank(key, lambda, bank_rng, n_override, w_override);
    FullMintUser user;
    wire::ObligationsBody obligations = user.on_puzzles(bank.puzzles(), user_rng);
    return user.on_tag_note(bank.on_obligations(obligations));
}

bool full_cverify(const FullKey& key, FullBanknote& note, Rng& bank_rng, Rng& user_rng,
                  VerifyTranscript* transcript) {
    FullVerifyBank bank(key);
    FullVerifyUser user(note);
    auto first = bank.on_init(user.init(), bank_rng);
    bool r = false;
    if (std::holds_alternative<wire::ChallengeBody>(first)) {
        wire::AnswersBody answers =
            user.on_challenge(std::get<wire::ChallengeBody>(first), user_rng);
        r = bank.on_answers(answers);
    }
    user.on_result(r);
    if (transcript) *transcript = user.transcript();
    return r;
}

}  // namespace semiqm::money
