#include <doctest.h>

#include <set>

#include "semiqm/primitives.hpp"

using namespace semiqm;
using namespace semiqm::primitives;

namespace {

Bytes random_message(Rng& rng, size_t max_len) {
    Bytes m(rng.below(max_len + 1));
    rng.fill(m);
    return m;
}

}  // namespace

TEST_CASE("mac completeness, binding, and forgery resistance") {
    Rng rng(31);
    MacKey k = mac_keygen(rng);
    for (int t = 0; t < 1000; ++t) {
        Bytes m = random_message(rng, 200);
        CHECK(mac_verify(k, m, mac_tag(k, m)));
    }
    Bytes m = to_bytes("obligations");
    Tag tag = mac_tag(k, m);
    Tag flipped = tag;
    flipped.bytes[7] ^= 0x20;
    CHECK(!mac_verify(k, m, flipped));

    int accepted = 0;
    for (int t = 0; t < 100000; ++t) {
        Tag random_tag{rng.bytes<32>()};
        if (mac_verify(k, m, random_tag)) ++accepted;
    }
    CHECK(accepted == 0);
}

TEST_CASE("encryption round-trips and randomizes") {
    Rng rng(32);
    EncKey k = enc_keygen(rng);
    for (size_t len : {size_t{0}, size_t{1}, size_t{1000}}) {
        Bytes m(len);
        rng.fill(m);
        Ciphertext c = encrypt(k, m, rng);
        CHECK(c.body.size() == len);
        CHECK(decrypt(k, c) == m);
    }
    Bytes m = to_bytes("same plaintext");
    Ciphertext c1 = encrypt(k, m, rng);
    Ciphertext c2 = encrypt(k, m, rng);
    CHECK(c1.nonce != c2.nonce);
    CHECK(c1.body != c2.body);

    // Nonces never repeat within a run.
    std::set<std::string> nonces;
    for (int t = 0; t < 2000; ++t) {
        Ciphertext c = encrypt(k, m, rng);
        CHECK(nonces.insert(to_hex(c.nonce)).second);
    }

    CHECK_THROWS_AS(Ciphertext::parse(Bytes(15, 0)), MalformedCiphertext);
    CHECK(Ciphertext::parse(c1.serialize()) == c1);
}

TEST_CASE("signatures verify and reject forgeries") {
    Rng rng(33);
    SigKeyPair kp = sig_keygen(rng);
    Bytes m = to_bytes("serial-number");
    Bytes sig = sign(kp, m);
    CHECK(sig.size() == 64);
    CHECK(sig_verify(kp.pk, m, sig));

    Rng rng2(34);
    SigKeyPair other = sig_keygen(rng2);
    CHECK(!sig_verify(other.pk, m, sig));
    CHECK(!sig_verify(kp.pk, to_bytes("other message"), sig));
    CHECK(!sig_verify(kp.pk, m, Bytes(63, 1)));

    // Seed determinism.
    Rng rng3(33);
    SigKeyPair again = sig_keygen(rng3);
    CHECK(again.pk == kp.pk);
    CHECK(sign(again, m) == sig);

    int accepted = 0;
    for (int t = 0; t < 100000; ++t) {
        Bytes random_sig(64);
        rng.fill(random_sig);
        if (sig_verify(kp.pk, m, random_sig)) ++accepted;
    }
    CHECK(accepted == 0);
}

TEST_CASE("canonical encoding is length-prefixed and splice-proof") {
    CanonicalWriter w;
    w.field(to_bytes("a"));
    w.field(to_bytes("bc"));
    Bytes one = w.take();

    CanonicalWriter w2;
    w2.field(to_bytes("ab"));
    w2.field(to_bytes("c"));
    CHECK(one != w2.take());

    CanonicalReader r(one);
    CHECK(*r.field() == to_bytes("a"));
    CHECK(*r.field() == to_bytes("bc"));
    CHECK(!r.field().has_value());
    CHECK(r.done());

    // Truncation is detected.
    Bytes cut(one.begin(), one.end() - 1);
    CanonicalReader bad(cut);
    CHECK(*bad.field() == to_bytes("a"));
    CHECK(!bad.field().has_value());
    CHECK(!bad.done());
}
