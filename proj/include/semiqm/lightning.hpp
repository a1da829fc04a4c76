#pragma once

#include <array>
#include <set>
#include <string>

#include "semiqm/bytes.hpp"
#include "semiqm/rng.hpp"
#include "semiqm/wire.hpp"

// Public memory-dependent scheme over a quantum-lightning interface, with a
// toy hash-commitment instantiation: a bolt is a random secret, its serial is
// H(secret), and converting the bolt to a certificate reveals the secret and
// consumes the bolt. The toy makes no uncloneability claim (the record can be
// copied); single ownership is a convention the harness enforces, and the
// binding that is real here is preimage resistance of the serial.
namespace semiqm::lightning {

struct StorageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Hash parameterization produced by setup; bolts only interoperate with the
// suite that minted them.
struct LightningSuite {
    std::array<uint8_t, 32> domain{};
    bool operator==(const LightningSuite&) const = default;
};

struct Bolt {
    std::array<uint8_t, 32> secret{};
    std::array<uint8_t, 32> serial{};
    bool consumed = false;
};

struct Certificate {
    std::array<uint8_t, 32> c{};
};

LightningSuite ql_setup(int lambda, Rng& rng);
Bolt gen_bolt(const LightningSuite& suite, Rng& rng);
// Non-consuming; false for a consumed bolt or a serial mismatch.
bool verify_bolt(const LightningSuite& suite, const Bolt& bolt,
                 const std::array<uint8_t, 32>& serial);
// Consumes the bolt. Throws on a bolt that was already consumed.
Certificate gen_certificate(const LightningSuite& suite, Bolt& bolt,
                            const std::array<uint8_t, 32>& serial);
bool verify_certificate(const LightningSuite& suite, const std::array<uint8_t, 32>& serial,
                        const Certificate& cert);

struct PublicKeyBundle {
    LightningSuite suite;
    std::array<uint8_t, 32> sig_pk{};
};

std::pair<PublicKeyBundle, primitives::SigKeyPair> p_keygen(int lambda, Rng& rng);

struct PublicBanknote {
    Bolt bolt;
    std::array<uint8_t, 32> serial{};
    Bytes signature;
};

// Spent-serial database: append-only file of hex serials, one per line, fsynced
// per insert so a crash after a reply can never un-spend a serial.
class SpentSerialDB {
public:
    explicit SpentSerialDB(const std::string& path);
    ~SpentSerialDB();
    SpentSerialDB(const SpentSerialDB&) = delete;
    SpentSerialDB& operator=(const SpentSerialDB&) = delete;

    bool contains(const std::array<uint8_t, 32>& serial) const;
    // Atomically checks and records. Returns false when already spent.
    // Durable before returning true; storage failure throws StorageError.
    bool check_and_insert(const std::array<uint8_t, 32>& serial);
    size_t size() const { return serials_.size(); }

private:
    std::string path_;
    int fd_ = -1;
    std::set<std::string> serials_;
};

// Two-message mint at the domain level: the user samples the bolt and the bank
// signs the serial. Message-level handling lives in the bank dispatcher.
PublicBanknote p_mint(const PublicKeyBundle& pk, const primitives::SigKeyPair& sk,
                      Rng& user_rng);

// Non-consuming public verification: signature plus bolt check.
bool p_qverify(const PublicKeyBundle& pk, const PublicBanknote& note);

// Bank side of the spend round. Checks signature, certificate, and the serial
// database; inserts durably before reporting success.
bool p_cverify_bank(const PublicKeyBundle& pk, SpentSerialDB& db, const wire::PSpendBody& body);

// User side: converts the bolt (consuming it) and assembles the spend message.
wire::PSpendBody p_cverify_user(const PublicKeyBundle& pk, PublicBanknote& note);

}  // namespace semiqm::lightning
