#include "semiqm/lightning.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>

#include "semiqm/hash.hpp"

namespace semiqm::lightning {

static std::array<uint8_t, 32> serial_of(const LightningSuite& suite,
                                         const std::array<uint8_t, 32>& secret) {
    return keyed_hash(suite.domain, "bolt", secret);
}

LightningSuite ql_setup(int, Rng& rng) {
    return LightningSuite{rng.bytes<32>()};
}

Bolt gen_bolt(const LightningSuite& suite, Rng& rng) {
    Bolt b;
    b.secret = rng.bytes<32>();
    b.serial = serial_of(suite, b.secret);
    return b;
}

bool verify_bolt(const LightningSuite& suite, const Bolt& bolt,
                 const std::array<uint8_t, 32>& serial) {
    if (bolt.consumed) return false;
    return ct_equal(serial_of(suite, bolt.secret), serial);
}

Certificate gen_certificate(const LightningSuite&, Bolt& bolt,
                            const std::array<uint8_t, 32>&) {
    if (bolt.consumed) throw std::logic_error("bolt already consumed");
    bolt.consumed = true;
    return Certificate{bolt.secret};
}

bool verify_certificate(const LightningSuite& suite, const std::array<uint8_t, 32>& serial,
                        const Certificate& cert) {
    return ct_equal(serial_of(suite, cert.c), serial);
}

std::pair<PublicKeyBundle, primitives::SigKeyPair> p_keygen(int lambda, Rng& rng) {
    PublicKeyBundle pk;
    pk.suite = ql_setup(lambda, rng);
    primitives::SigKeyPair sig = primitives::sig_keygen(rng);
    pk.sig_pk = sig.pk;
    return {pk, sig};
}

SpentSerialDB::SpentSerialDB(const std::string& path) : path_(path) {
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) serials_.insert(line);
    }
    fd_ = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
    if (fd_ < 0) throw StorageError("cannot open spent-serial file: " + path);
}

SpentSerialDB::~SpentSerialDB() {
    if (fd_ >= 0) ::close(fd_);
}

bool SpentSerialDB::contains(const std::array<uint8_t, 32>& serial) const {
    return serials_.count(to_hex(serial)) > 0;
}

bool SpentSerialDB::check_and_insert(const std::array<uint8_t, 32>& serial) {
    std::string hex = to_hex(serial);
    if (serials_.count(hex)) return false;
    std::string line = hex + "\n";
    ssize_t written = ::write(fd_, line.data(), line.size());
    if (written != static_cast<ssize_t>(line.size()) || ::fsync(fd_) != 0) {
        throw StorageError(std::string("spent-serial write failed: ") + std::strerror(errno));
    }
    serials_.insert(hex);
    return true;
}

PublicBanknote p_mint(const PublicKeyBundle& pk, const primitives::SigKeyPair& sk,
                      Rng& user_rng) {
    PublicBanknote note;
    note.bolt = gen_bolt(pk.suite, user_rng);
    note.serial = note.bolt.serial;
    note.signature = primitives::sign(sk, note.serial);
    return note;
}

bool p_qverify(const PublicKeyBundle& pk, const PublicBanknote& note) {
    bool r_sigma = primitives::sig_verify(pk.sig_pk, note.serial, note.signature);
    bool r_b = verify_bolt(pk.suite, note.bolt, note.serial);
    return r_sigma && r_b;
}

bool p_cverify_bank(const PublicKeyBundle& pk, SpentSerialDB& db, const wire::PSpendBody& body) {
    bool r_sigma = primitives::sig_verify(pk.sig_pk, body.serial, body.signature);
    bool r_c = verify_certificate(pk.suite, body.serial, Certificate{body.certificate});
    if (!(r_sigma && r_c)) return false;
    return db.check_and_insert(body.serial);
}

wire::PSpendBody p_cverify_user(const PublicKeyBundle& pk, PublicBanknote& note) {
    wire::PSpendBody body;
    body.serial = note.serial;
    body.signature = note.signature;
    body.certificate = gen_certificate(pk.suite, note.bolt, note.serial).c;
    return body;
}

}  // namespace semiqm::lightning
