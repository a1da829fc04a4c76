#include "semiqm/qsim.hpp"

#include <bit>
#include <cmath>

namespace semiqm::qsim {

static uint64_t width_mask(int width) {
    return width == 64 ? ~0ull : (1ull << width) - 1;
}

BitVec::BitVec(uint64_t value, int width) : value_(value), width_(width) {
    if (width < 1 || width > 64) throw WidthError("BitVec width out of range");
    if ((value & ~width_mask(width)) != 0) throw WidthError("value exceeds width");
}

BitVec BitVec::random(int width, Rng& rng) {
    if (width < 1 || width > 64) throw WidthError("BitVec width out of range");
    return BitVec(rng.next_u64() & width_mask(width), width);
}

int BitVec::bit(int i) const {
    if (i < 0 || i >= width_) throw WidthError("bit index out of range");
    return static_cast<int>((value_ >> (width_ - 1 - i)) & 1u);
}

BitVec BitVec::operator^(const BitVec& other) const {
    if (width_ != other.width_) throw WidthError("width mismatch");
    return BitVec(value_ ^ other.value_, width_);
}

Bytes BitVec::pack() const {
    int nbytes = (width_ + 7) / 8;
    // Shift the string into the high bits so padding lands in the low bits of
    // the final byte, then emit big-endian.
    uint64_t shifted = value_ << (8 * nbytes - width_);
    Bytes out(nbytes);
    for (int j = 0; j < nbytes; ++j) {
        out[j] = static_cast<uint8_t>(shifted >> (8 * (nbytes - 1 - j)));
    }
    return out;
}

BitVec BitVec::unpack(std::span<const uint8_t> bytes, int width) {
    if (width < 1 || width > 64) throw WidthError("BitVec width out of range");
    int nbytes = (width + 7) / 8;
    if (static_cast<int>(bytes.size()) != nbytes) throw DecodeError("bad packed length");
    uint64_t v = 0;
    for (int j = 0; j < nbytes; ++j) v = v << 8 | bytes[j];
    int pad = 8 * nbytes - width;
    if ((v & ((1ull << pad) - 1)) != 0) throw DecodeError("nonzero padding bits");
    return BitVec(v >> pad, width);
}

BitVec BitVec::from_hex(const std::string& hex, int width) {
    return unpack(semiqm::from_hex(hex), width);
}

int dot(const BitVec& a, const BitVec& b) {
    if (a.width() != b.width()) throw WidthError("dot width mismatch");
    return std::popcount(a.value() & b.value()) & 1;
}

ClawState::ClawState(BitVec x0, BitVec x1) : x0_(x0), x1_(x1) {
    if (x0.width() != x1.width()) throw WidthError("claw branch width mismatch");
    if (x0 == x1) throw std::invalid_argument("claw branches must differ");
}

ClawState ClawState::restore(BitVec x0, BitVec x1, bool consumed) {
    ClawState s(x0, x1);
    s.consumed_ = consumed;
    return s;
}

std::pair<int, BitVec> measure_standard(ClawState& state, Rng& rng) {
    if (state.consumed_) throw ConsumedError("claw state already measured");
    state.consumed_ = true;
    int i = rng.bit();
    return {i, i == 0 ? state.x0_ : state.x1_};
}

std::pair<int, BitVec> measure_hadamard(ClawState& state, Rng& rng) {
    if (state.consumed_) throw ConsumedError("claw state already measured");
    state.consumed_ = true;
    BitVec d = BitVec::random(state.width(), rng);
    int i = dot(d, state.x0_ ^ state.x1_);
    return {i, d};
}

double DenseState::norm_squared() const {
    double total = 0.0;
    for (const auto& a : amplitudes) total += std::norm(a);
    return total;
}

DenseState dense_from_claw(const BitVec& x0, const BitVec& x1) {
    if (x0.width() != x1.width()) throw WidthError("claw branch width mismatch");
    if (x0 == x1) throw std::invalid_argument("claw branches must differ");
    int w = x0.width();
    if (w > 8) throw WidthError("dense oracle limited to w <= 8");
    DenseState s;
    s.qubits = w + 1;
    s.amplitudes.assign(1ull << s.qubits, {0.0, 0.0});
    double amp = 1.0 / std::sqrt(2.0);
    s.amplitudes[x0.value()] = amp;                       // label (0 || x0)
    s.amplitudes[(1ull << w) | x1.value()] = amp;         // label (1 || x1)
    return s;
}

DenseState dense_hadamard(const DenseState& s) {
    DenseState out = s;
    // In-place Walsh-Hadamard over every qubit.
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    size_t size = out.amplitudes.size();
    for (size_t step = 1; step < size; step <<= 1) {
        for (size_t group = 0; group < size; group += 2 * step) {
            for (size_t k = group; k < group + step; ++k) {
                auto a = out.amplitudes[k];
                auto b = out.amplitudes[k + step];
                out.amplitudes[k] = (a + b) * inv_sqrt2;
                out.amplitudes[k + step] = (a - b) * inv_sqrt2;
            }
        }
    }
    return out;
}

uint64_t dense_sample(const DenseState& s, Rng& rng) {
    // Inverse-CDF over |amplitude|^2. The state is normalized to 1e-9, so
    // falling off the end can only happen through rounding; clamp to the last
    // nonzero label in that case.
    double u = static_cast<double>(rng.next_u64()) / static_cast<double>(UINT64_MAX);
    double acc = 0.0;
    uint64_t last_nonzero = 0;
    for (uint64_t label = 0; label < s.amplitudes.size(); ++label) {
        double p = std::norm(s.amplitudes[label]);
        if (p > 0) last_nonzero = label;
        acc += p;
        if (u < acc) return label;
    }
    return last_nonzero;
}

}  // namespace semiqm::qsim
