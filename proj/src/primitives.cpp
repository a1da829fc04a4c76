#include "semiqm/primitives.hpp"

#include <openssl/evp.h>

#include <memory>
#include <stdexcept>

#include "semiqm/hash.hpp"

namespace semiqm::primitives {

MacKey mac_keygen(Rng& rng) {
    return MacKey{rng.bytes<32>()};
}

Tag mac_tag(const MacKey& k, std::span<const uint8_t> msg) {
    return Tag{hmac_sha256(k.bytes, msg)};
}

bool mac_verify(const MacKey& k, std::span<const uint8_t> msg, const Tag& t) {
    Tag expected = mac_tag(k, msg);
    return ct_equal(expected.bytes, t.bytes);
}

Bytes Ciphertext::serialize() const {
    Bytes out(nonce.begin(), nonce.end());
    out.insert(out.end(), body.begin(), body.end());
    return out;
}

Ciphertext Ciphertext::parse(std::span<const uint8_t> raw) {
    if (raw.size() < 16) throw MalformedCiphertext("ciphertext shorter than nonce");
    Ciphertext c;
    std::copy(raw.begin(), raw.begin() + 16, c.nonce.begin());
    c.body.assign(raw.begin() + 16, raw.end());
    return c;
}

EncKey enc_keygen(Rng& rng) {
    return EncKey{rng.bytes<32>()};
}

static void apply_keystream(const EncKey& k, const std::array<uint8_t, 16>& nonce,
                            std::span<const uint8_t> in, Bytes& out) {
    out.resize(in.size());
    for (size_t block = 0; block * 32 < in.size(); ++block) {
        Bytes data(nonce.begin(), nonce.end());
        append_u64_be(data, block);
        Digest ks = keyed_hash(k.bytes, "stream", data);
        size_t base = block * 32;
        size_t len = std::min<size_t>(32, in.size() - base);
        for (size_t j = 0; j < len; ++j) out[base + j] = in[base + j] ^ ks[j];
    }
}

Ciphertext encrypt(const EncKey& k, std::span<const uint8_t> msg, Rng& rng) {
    Ciphertext c;
    c.nonce = rng.bytes<16>();
    apply_keystream(k, c.nonce, msg, c.body);
    return c;
}

Bytes decrypt(const EncKey& k, const Ciphertext& c) {
    Bytes out;
    apply_keystream(k, c.nonce, c.body, out);
    return out;
}

using PkeyPtr = std::unique_ptr<EVP_PKEY, decltype(&EVP_PKEY_free)>;
using CtxPtr = std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)>;

SigKeyPair sig_keygen(Rng& rng) {
    SigKeyPair kp;
    kp.sk_seed = rng.bytes<32>();
    PkeyPtr pkey(EVP_PKEY_new_raw_private_key(EVP_PKEY_ED25519, nullptr, kp.sk_seed.data(),
                                              kp.sk_seed.size()),
                 EVP_PKEY_free);
    if (!pkey) throw std::runtime_error("ed25519 keygen failed");
    size_t len = kp.pk.size();
    if (EVP_PKEY_get_raw_public_key(pkey.get(), kp.pk.data(), &len) != 1 || len != kp.pk.size()) {
        throw std::runtime_error("ed25519 public key extraction failed");
    }
    return kp;
}

Bytes sign(const SigKeyPair& kp, std::span<const uint8_t> msg) {
    PkeyPtr pkey(EVP_PKEY_new_raw_private_key(EVP_PKEY_ED25519, nullptr, kp.sk_seed.data(),
                                              kp.sk_seed.size()),
                 EVP_PKEY_free);
    if (!pkey) throw std::runtime_error("ed25519 key load failed");
    CtxPtr ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    if (!ctx || EVP_DigestSignInit(ctx.get(), nullptr, nullptr, nullptr, pkey.get()) != 1) {
        throw std::runtime_error("ed25519 sign init failed");
    }
    Bytes sig(64);
    size_t sig_len = sig.size();
    if (EVP_DigestSign(ctx.get(), sig.data(), &sig_len, msg.data(), msg.size()) != 1 ||
        sig_len != sig.size()) {
        throw std::runtime_error("ed25519 sign failed");
    }
    return sig;
}

bool sig_verify(std::span<const uint8_t> pk, std::span<const uint8_t> msg,
                std::span<const uint8_t> sig) {
    if (pk.size() != 32 || sig.size() != 64) return false;
    PkeyPtr pkey(EVP_PKEY_new_raw_public_key(EVP_PKEY_ED25519, nullptr, pk.data(), pk.size()),
                 EVP_PKEY_free);
    if (!pkey) return false;
    CtxPtr ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    if (!ctx || EVP_DigestVerifyInit(ctx.get(), nullptr, nullptr, nullptr, pkey.get()) != 1) {
        return false;
    }
    return EVP_DigestVerify(ctx.get(), sig.data(), sig.size(), msg.data(), msg.size()) == 1;
}

void CanonicalWriter::field(std::span<const uint8_t> bytes) {
    append_u32_be(out_, static_cast<uint32_t>(bytes.size()));
    out_.insert(out_.end(), bytes.begin(), bytes.end());
}

std::optional<Bytes> CanonicalReader::field() {
    if (corrupt_ || pos_ + 4 > data_.size()) {
        if (pos_ != data_.size()) corrupt_ = true;
        return std::nullopt;
    }
    uint32_t len = 0;
    for (int j = 0; j < 4; ++j) len = len << 8 | data_[pos_ + j];
    pos_ += 4;
    if (pos_ + len > data_.size()) {
        corrupt_ = true;
        return std::nullopt;
    }
    Bytes out(data_.begin() + pos_, data_.begin() + pos_ + len);
    pos_ += len;
    return out;
}

}  // namespace semiqm::primitives
