#include "semiqm/ntcf_trapdoor.hpp"

#include "semiqm/hash.hpp"

namespace semiqm::ntcf {

namespace {

constexpr int kFeistelRounds = 4;

uint64_t mask_of(int bits) {
    return bits == 64 ? ~0ull : (1ull << bits) - 1;
}

uint64_t round_value(const std::array<uint8_t, 32>& key, int round, uint64_t half,
                     int half_width, int out_width) {
    Bytes data;
    data.push_back(static_cast<uint8_t>(round));
    data.push_back(static_cast<uint8_t>(half_width));
    append_u64_be(data, half);
    Digest h = keyed_hash(key, "feistel", data);
    uint64_t v = 0;
    for (int j = 0; j < 8; ++j) v = v << 8 | h[j];
    return v & mask_of(out_width);
}

// Alternating-split Feistel over w bits. Round r splits the state into a top
// part A and bottom part B whose sizes swap each round, so odd widths stay
// invertible. Each round maps (A || B) to (B || A ^ F_r(B)).
uint64_t permute(const std::array<uint8_t, 32>& key, int w, uint64_t x) {
    int top = (w + 1) / 2;
    for (int r = 0; r < kFeistelRounds; ++r) {
        int bottom = w - top;
        uint64_t a = x >> bottom;
        uint64_t b = x & mask_of(bottom);
        uint64_t a2 = a ^ round_value(key, r, b, bottom, top);
        x = b << top | a2;
        top = bottom;
    }
    return x;
}

uint64_t permute_inverse(const std::array<uint8_t, 32>& key, int w, uint64_t y) {
    // Replay the split sizes forward, then unwind.
    int sizes[kFeistelRounds];
    int top = (w + 1) / 2;
    for (int r = 0; r < kFeistelRounds; ++r) {
        sizes[r] = top;
        top = w - top;
    }
    for (int r = kFeistelRounds - 1; r >= 0; --r) {
        int a_bits = sizes[r];
        int b_bits = w - a_bits;
        uint64_t b = y >> a_bits;
        uint64_t a2 = y & mask_of(a_bits);
        uint64_t a = a2 ^ round_value(key, r, b, b_bits, a_bits);
        y = a << b_bits | b;
    }
    return y;
}

qsim::BitVec derive_shift(const std::array<uint8_t, 32>& perm_key, int w) {
    Digest h = keyed_hash(perm_key, "shift", {});
    uint64_t v = 0;
    for (int j = 0; j < 8; ++j) v = v << 8 | h[j];
    return qsim::BitVec(v & mask_of(w), w);
}

void check_width(const FunctionKey& k, const qsim::BitVec& x) {
    if (x.width() != k.width) throw qsim::WidthError("input width does not match key");
}

}  // namespace

std::pair<FunctionKey, Trapdoor> keygen_f(int width, Rng& rng) {
    if (width < 2 || width > 64) throw qsim::WidthError("keygen requires 2 <= w <= 64");
    FunctionKey k;
    k.width = width;
    qsim::BitVec shift = qsim::BitVec::zero(width);
    do {
        k.perm_key = rng.bytes<32>();
        shift = derive_shift(k.perm_key, width);
    } while (shift.is_zero());
    Trapdoor t{width, shift, k.perm_key};
    return {k, t};
}

Image eval(const FunctionKey& k, int b, const qsim::BitVec& x) {
    check_width(k, x);
    qsim::BitVec shifted = b == 0 ? x : x ^ derive_shift(k.perm_key, k.width);
    return Image{qsim::BitVec(permute(k.perm_key, k.width, shifted.value()), k.width)};
}

bool check(const FunctionKey& k, int b, const qsim::BitVec& x, const Image& y) {
    if (x.width() != k.width || y.y.width() != k.width) {
        throw qsim::WidthError("check width mismatch");
    }
    return eval(k, b, x) == y;
}

qsim::BitVec invert(const Trapdoor& t, int b, const Image& y) {
    if (y.y.width() != t.width) throw qsim::WidthError("image width does not match trapdoor");
    qsim::BitVec x0(permute_inverse(t.perm_key, t.width, y.y.value()), t.width);
    return b == 0 ? x0 : x0 ^ t.shift;
}

std::pair<qsim::BitVec, qsim::BitVec> claw_of(const Trapdoor& t, const Image& y) {
    qsim::BitVec x0 = invert(t, 0, y);
    return {x0, x0 ^ t.shift};
}

bool good_set_member(const Trapdoor&, int, const qsim::BitVec&, const qsim::BitVec& d) {
    return !d.is_zero();
}

HardcoreClass hardcore_member(const Trapdoor& t, int b, const qsim::BitVec& x,
                              const qsim::BitVec& d, int c) {
    if (!good_set_member(t, b, x, d)) return HardcoreClass::Neither;
    // Every x has the claw partner x ^ shift, so the equation bit is d.shift.
    return qsim::dot(d, t.shift) == (c & 1) ? HardcoreClass::InH : HardcoreClass::InHBar;
}

namespace detail {
Trapdoor trapdoor_view(const FunctionKey& k) {
    return Trapdoor{k.width, derive_shift(k.perm_key, k.width), k.perm_key};
}
}  // namespace detail

}  // namespace semiqm::ntcf
