#pragma once

#include <array>
#include <optional>
#include <span>

#include "semiqm/bytes.hpp"
#include "semiqm/rng.hpp"

// Classical building blocks: MAC (HMAC-SHA256), randomized symmetric stream
// encryption (hash keystream under a fresh 16-byte nonce), and Ed25519
// signatures. Standard constructions behind the fixed key/tag sizes the
// protocols rely on.
namespace semiqm::primitives {

struct MalformedCiphertext : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MacKey {
    std::array<uint8_t, 32> bytes{};
    bool operator==(const MacKey&) const = default;
};

struct Tag {
    std::array<uint8_t, 32> bytes{};
    bool operator==(const Tag&) const = default;
};

MacKey mac_keygen(Rng& rng);
Tag mac_tag(const MacKey& k, std::span<const uint8_t> msg);
bool mac_verify(const MacKey& k, std::span<const uint8_t> msg, const Tag& t);

struct EncKey {
    std::array<uint8_t, 32> bytes{};
    bool operator==(const EncKey&) const = default;
};

struct Ciphertext {
    std::array<uint8_t, 16> nonce{};
    Bytes body;  // same length as the plaintext

    Bytes serialize() const;                           // nonce || body
    static Ciphertext parse(std::span<const uint8_t>); // throws MalformedCiphertext
    bool operator==(const Ciphertext&) const = default;
};

EncKey enc_keygen(Rng& rng);
Ciphertext encrypt(const EncKey& k, std::span<const uint8_t> msg, Rng& rng);
Bytes decrypt(const EncKey& k, const Ciphertext& c);

struct SigKeyPair {
    std::array<uint8_t, 32> pk{};
    std::array<uint8_t, 32> sk_seed{};
};

SigKeyPair sig_keygen(Rng& rng);
Bytes sign(const SigKeyPair& kp, std::span<const uint8_t> msg);  // 64 bytes
bool sig_verify(std::span<const uint8_t> pk, std::span<const uint8_t> msg,
                std::span<const uint8_t> sig);

// Canonical encoding for MAC over structured data: 4-byte big-endian length
// prefix per field, fields in declaration order. Fixes the byte string that
// gets tagged, so reordering or re-splitting fields cannot collide.
class CanonicalWriter {
public:
    void field(std::span<const uint8_t> bytes);
    Bytes take() { return std::move(out_); }

private:
    Bytes out_;
};

class CanonicalReader {
public:
    explicit CanonicalReader(std::span<const uint8_t> data) : data_(data) {}
    std::optional<Bytes> field();  // nullopt once exhausted or on truncation
    bool done() const { return pos_ == data_.size() && !corrupt_; }

private:
    std::span<const uint8_t> data_;
    size_t pos_ = 0;
    bool corrupt_ = false;
};

}  // namespace semiqm::primitives
