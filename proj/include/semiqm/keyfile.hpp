#pragma once

#include <optional>
#include <string>

#include "semiqm/lightning.hpp"
#include "semiqm/money_private.hpp"

namespace semiqm::bank {

// Bank key material at rest: the full-scheme key pair, the signature keypair,
// and the lightning suite parameters, as a JSON document with hex fields.
// Serialization is canonical, so load/save round-trips byte-identically.
struct BankKeyFile {
    int version = 1;
    int lambda = 256;
    std::optional<int> n;  // repetition override; absent means derive from lambda
    std::optional<int> w;
    money::FullKey full_key;
    primitives::SigKeyPair sig;
    std::array<uint8_t, 32> lightning_domain{};

    static BankKeyFile generate(int lambda, std::optional<int> n, std::optional<int> w, Rng& rng);

    std::string dump() const;
    static BankKeyFile parse(const std::string& text);  // throws DecodeError

    void save(const std::string& path) const;
    static BankKeyFile load(const std::string& path);

    lightning::PublicKeyBundle public_bundle() const;
    std::string public_bundle_dump() const;
};

lightning::PublicKeyBundle parse_public_bundle(const std::string& text);
lightning::PublicKeyBundle load_public_bundle(const std::string& path);

}  // namespace semiqm::bank
