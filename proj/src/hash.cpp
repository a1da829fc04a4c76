#include "semiqm/hash.hpp"

#include <openssl/core_names.h>
#include <openssl/crypto.h>
#include <openssl/evp.h>

#include <cstdio>
#include <memory>
#include <stdexcept>

namespace semiqm {

std::string to_hex(std::span<const uint8_t> data) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2);
    for (uint8_t b : data) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0x0f]);
    }
    return out;
}

static int hex_nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

Bytes from_hex(const std::string& hex) {
    if (hex.size() % 2 != 0) throw DecodeError("hex string has odd length");
    Bytes out(hex.size() / 2);
    for (size_t i = 0; i < out.size(); ++i) {
        int hi = hex_nibble(hex[2 * i]);
        int lo = hex_nibble(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) throw DecodeError("invalid hex digit");
        out[i] = static_cast<uint8_t>(hi << 4 | lo);
    }
    return out;
}

void append_u32_be(Bytes& out, uint32_t v) {
    for (int i = 3; i >= 0; --i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void append_u64_be(Bytes& out, uint64_t v) {
    for (int i = 7; i >= 0; --i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

// OpenSSL 3 fetches algorithm implementations through a global property
// cache; doing that per call serializes the parallel game trials. Fetch once
// and keep per-thread contexts (freed at thread exit) instead.

namespace {

struct MdCtxFree {
    void operator()(EVP_MD_CTX* c) const { EVP_MD_CTX_free(c); }
};
struct MacCtxFree {
    void operator()(EVP_MAC_CTX* c) const { EVP_MAC_CTX_free(c); }
};

const EVP_MD* fetched_sha256() {
    static EVP_MD* md = EVP_MD_fetch(nullptr, "SHA256", nullptr);
    if (!md) throw std::runtime_error("cannot fetch SHA256");
    return md;
}

EVP_MD_CTX* tls_md_ctx() {
    thread_local std::unique_ptr<EVP_MD_CTX, MdCtxFree> ctx(EVP_MD_CTX_new());
    if (!ctx) throw std::runtime_error("cannot allocate digest context");
    return ctx.get();
}

}  // namespace

Digest sha256(std::span<const uint8_t> data) {
    EVP_MD_CTX* ctx = tls_md_ctx();
    Digest out;
    unsigned int len = 0;
    if (EVP_DigestInit_ex(ctx, fetched_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx, data.data(), data.size()) != 1 ||
        EVP_DigestFinal_ex(ctx, out.data(), &len) != 1 || len != out.size()) {
        throw std::runtime_error("SHA256 failure");
    }
    return out;
}

Digest keyed_hash(std::span<const uint8_t> key, std::string_view tag,
                  std::span<const uint8_t> data) {
    EVP_MD_CTX* ctx = tls_md_ctx();
    uint8_t tag_len[4] = {
        static_cast<uint8_t>(tag.size() >> 24), static_cast<uint8_t>(tag.size() >> 16),
        static_cast<uint8_t>(tag.size() >> 8), static_cast<uint8_t>(tag.size())};
    Digest out;
    unsigned int len = 0;
    if (EVP_DigestInit_ex(ctx, fetched_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx, key.data(), key.size()) != 1 ||
        EVP_DigestUpdate(ctx, tag_len, sizeof tag_len) != 1 ||
        EVP_DigestUpdate(ctx, tag.data(), tag.size()) != 1 ||
        EVP_DigestUpdate(ctx, data.data(), data.size()) != 1 ||
        EVP_DigestFinal_ex(ctx, out.data(), &len) != 1 || len != out.size()) {
        throw std::runtime_error("SHA256 failure");
    }
    return out;
}

Digest hmac_sha256(std::span<const uint8_t> key, std::span<const uint8_t> msg) {
    static EVP_MAC* mac = EVP_MAC_fetch(nullptr, "HMAC", nullptr);
    if (!mac) throw std::runtime_error("cannot fetch HMAC");
    // The digest is bound at the first init; later inits only change the key.
    thread_local std::unique_ptr<EVP_MAC_CTX, MacCtxFree> ctx;
    bool fresh = !ctx;
    if (fresh) {
        ctx.reset(EVP_MAC_CTX_new(mac));
        if (!ctx) throw std::runtime_error("cannot allocate HMAC context");
    }
    char digest_name[] = "SHA256";
    OSSL_PARAM params[] = {
        OSSL_PARAM_construct_utf8_string(OSSL_MAC_PARAM_DIGEST, digest_name, 0),
        OSSL_PARAM_construct_end()};
    Digest out;
    size_t len = 0;
    if (EVP_MAC_init(ctx.get(), key.data(), key.size(), fresh ? params : nullptr) != 1) {
        throw std::runtime_error("HMAC init failure");
    }
    if (EVP_MAC_update(ctx.get(), msg.data(), msg.size()) != 1 ||
        EVP_MAC_final(ctx.get(), out.data(), &len, out.size()) != 1 || len != out.size()) {
        throw std::runtime_error("HMAC failure");
    }
    return out;
}

bool ct_equal(std::span<const uint8_t> a, std::span<const uint8_t> b) {
    if (a.size() != b.size()) return false;
    return CRYPTO_memcmp(a.data(), b.data(), a.size()) == 0;
}

}  // namespace semiqm
