#include "semiqm/bank.hpp"

namespace semiqm::bank {

using wire::MsgType;
using wire::WireMessage;

Bank::Bank(const BankKeyFile& keyfile, BankConfig cfg, uint64_t session_seed)
    : full_key_(keyfile.full_key),
      sig_(keyfile.sig),
      pk_(keyfile.public_bundle()),
      cfg_(std::move(cfg)),
      rng_(session_seed) {
    if (!cfg_.n) cfg_.n = keyfile.n;
    if (!cfg_.w) cfg_.w = keyfile.w;
    if (cfg_.lambda == 0) cfg_.lambda = keyfile.lambda;
    if (!cfg_.spent_db_path.empty()) db_.emplace(cfg_.spent_db_path);
}

std::vector<WireMessage> Bank::on_message(const WireMessage& msg) {
    std::lock_guard lock(mu_);
    return handle_locked(msg);
}

void Bank::drop_session(const std::string& session_id) {
    std::lock_guard lock(mu_);
    sessions_.erase(session_id);
}

size_t Bank::active_sessions() const {
    std::lock_guard lock(mu_);
    return sessions_.size();
}

std::string Bank::private_state_snapshot() const {
    wire::json j;
    j["mac_key"] = to_hex(full_key_.mac_key.bytes);
    j["enc_key"] = to_hex(full_key_.enc_key.bytes);
    j["sig_sk"] = to_hex(sig_.sk_seed);
    j["lambda"] = cfg_.lambda;
    j["n"] = cfg_.n ? wire::json(*cfg_.n) : wire::json(nullptr);
    j["w"] = cfg_.w ? wire::json(*cfg_.w) : wire::json(nullptr);
    j["timeout_ms"] = cfg_.timeout_ms;
    return j.dump();
}

WireMessage Bank::error_reply(const WireMessage& in, const std::string& what) {
    sessions_.erase(in.session);
    return WireMessage{in.session, in.seq + 1, MsgType::Error,
                       wire::to_json(wire::ErrorBody{what})};
}

std::vector<WireMessage> Bank::handle_locked(const WireMessage& in) {
    auto reply = [&](MsgType t, wire::json body) {
        return WireMessage{in.session, in.seq + 1, t, std::move(body)};
    };
    try {
        auto it = sessions_.find(in.session);
        if (it == sessions_.end()) {
            if (in.seq != 0) return {error_reply(in, "first message must have seq 0")};
            switch (in.type) {
                case MsgType::MintInit: {
                    money::FullMintBank mint(full_key_, cfg_.lambda, rng_, cfg_.n, cfg_.w);
                    wire::PuzzlesBody puzzles = mint.puzzles();
                    sessions_.emplace(in.session, Session{2, std::move(mint)});
                    return {reply(MsgType::Puzzles, wire::to_json(puzzles))};
                }
                case MsgType::VerifyInit: {
                    money::FullVerifyBank verify(full_key_);
                    auto first = verify.on_init(wire::verify_init_body(in.body), rng_);
                    if (std::holds_alternative<wire::ResultBody>(first)) {
                        return {reply(MsgType::Result,
                                      wire::to_json(std::get<wire::ResultBody>(first)))};
                    }
                    sessions_.emplace(in.session, Session{2, std::move(verify)});
                    return {reply(MsgType::Challenge,
                                  wire::to_json(std::get<wire::ChallengeBody>(first)))};
                }
                case MsgType::PMintSerial: {
                    wire::PMintSerialBody body = wire::p_mint_serial_body(in.body);
                    wire::PSignatureBody out{primitives::sign(sig_, body.serial)};
                    return {reply(MsgType::PSignature, wire::to_json(out))};
                }
                case MsgType::PSpend: {
                    if (!db_) return {error_reply(in, "public scheme not configured")};
                    bool ok = lightning::p_cverify_bank(pk_, *db_, wire::p_spend_body(in.body));
                    return {reply(MsgType::Result,
                                  wire::to_json(wire::ResultBody{ok, ok ? "OK" : "REJECTED"}))};
                }
                default:
                    return {error_reply(in, "unexpected session-opening message type")};
            }
        }

        Session& session = it->second;
        if (in.seq != session.expected_seq) {
            return {error_reply(in, "out-of-order sequence number")};
        }
        if (in.type == MsgType::Obligations &&
            std::holds_alternative<money::FullMintBank>(session.machine)) {
            auto& mint = std::get<money::FullMintBank>(session.machine);
            wire::TagNoteBody out = mint.on_obligations(wire::obligations_body(in.body));
            sessions_.erase(it);
            return {reply(MsgType::TagNote, wire::to_json(out))};
        }
        if (in.type == MsgType::Answers &&
            std::holds_alternative<money::FullVerifyBank>(session.machine)) {
            auto& verify = std::get<money::FullVerifyBank>(session.machine);
            bool ok = verify.on_answers(wire::answers_body(in.body));
            sessions_.erase(it);
            return {reply(MsgType::Result,
                          wire::to_json(wire::ResultBody{ok, ok ? "OK" : "REJECTED"}))};
        }
        return {error_reply(in, "message type does not fit session state")};
    } catch (const DecodeError& e) {
        return {error_reply(in, std::string("decode error: ") + e.what())};
    } catch (const wire::ProtocolError& e) {
        return {error_reply(in, std::string("protocol violation: ") + e.what())};
    }
    // lightning::StorageError deliberately propagates: fail closed, no reply.
}

void LoopbackTransport::send(const WireMessage& msg) {
    if (transcript_) transcript_->push_back(wire::encode(msg));
    for (WireMessage& reply : bank_.on_message(msg)) {
        if (transcript_) transcript_->push_back(wire::encode(reply));
        inbox_.push_back(std::move(reply));
    }
}

WireMessage LoopbackTransport::recv() {
    if (inbox_.empty()) throw wire::ProtocolError("no pending reply");
    WireMessage m = std::move(inbox_.front());
    inbox_.pop_front();
    return m;
}

}  // namespace semiqm::bank
