#pragma once

// Bank service core: a message dispatcher hosting the private full scheme and
// the public scheme behind the wire protocol. Thread-safe; the same dispatcher
// sits behind the socket server and the in-process loopback transport.
#define SEMIQM_BANK_INCLUDED 1

#include <deque>
#include <map>
#include <mutex>

#include "semiqm/keyfile.hpp"

namespace semiqm::bank {

struct BankConfig {
    int lambda = 256;
    std::optional<int> n;
    std::optional<int> w;
    int timeout_ms = 30000;
    std::string spent_db_path;  // empty disables the public scheme
};

class Bank {
public:
    Bank(const BankKeyFile& keyfile, BankConfig cfg, uint64_t session_seed);

    // Processes one incoming message and returns the replies. Protocol
    // violations produce an ERROR reply and abort the session; a spent-serial
    // storage failure propagates (fail-closed, no reply is sent).
    std::vector<wire::WireMessage> on_message(const wire::WireMessage& msg);

    // Forgets a session (connection closed, timeout). The private schemes
    // keep only the in-flight challenge there, so nothing durable is lost.
    void drop_session(const std::string& session_id);

    size_t active_sessions() const;

    // Canonical rendering of everything the private-scheme bank retains across
    // sessions: key material and configuration. Snapshot equality before and
    // after arbitrary private-scheme traffic is the statelessness check.
    std::string private_state_snapshot() const;

    const lightning::PublicKeyBundle& public_bundle() const { return pk_; }
    const BankConfig& config() const { return cfg_; }
    bool public_scheme_enabled() const { return db_.has_value(); }

private:
    struct Session {
        uint64_t expected_seq = 2;
        std::variant<money::FullMintBank, money::FullVerifyBank> machine;
    };

    std::vector<wire::WireMessage> handle_locked(const wire::WireMessage& msg);
    wire::WireMessage error_reply(const wire::WireMessage& in, const std::string& what);

    money::FullKey full_key_;
    primitives::SigKeyPair sig_;
    lightning::PublicKeyBundle pk_;
    BankConfig cfg_;
    Rng rng_;
    std::optional<lightning::SpentSerialDB> db_;
    std::map<std::string, Session> sessions_;
    mutable std::mutex mu_;
};

// In-process transport with the same semantics as the socket: replies queue up
// in order and every message crossing the boundary can be logged.
class LoopbackTransport : public wire::Transport {
public:
    explicit LoopbackTransport(Bank& bank, std::vector<std::string>* transcript = nullptr)
        : bank_(bank), transcript_(transcript) {}

    void send(const wire::WireMessage& msg) override;
    wire::WireMessage recv() override;

private:
    Bank& bank_;
    std::vector<std::string>* transcript_;
    std::deque<wire::WireMessage> inbox_;
};

}  // namespace semiqm::bank
