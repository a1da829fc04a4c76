#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "semiqm/bytes.hpp"
#include "semiqm/rng.hpp"

// Exact simulator for the only states the money protocols ever hold: two-branch
// claw superpositions (|0,x0> + |1,x1>)/sqrt(2) and, for cross-validation at
// small widths, dense statevectors.
//
// A claw state is kept symbolically as its two branch labels. Both measurements
// the protocols use have closed forms:
//   standard basis:  (i, x_i) with i uniform;
//   Hadamard basis (all w+1 qubits): d uniform over {0,1}^w and i = d.(x0^x1).
// The Hadamard form follows from expanding H^{(w+1)} on the claw state: the
// amplitude at label (i||d) is proportional to (-1)^{d.x0} + (-1)^{i + d.x1},
// which vanishes unless i = d.(x0^x1), and the surviving 2^w labels share equal
// weight. The relative phase (-1)^{d.x0} affects no observable used here and is
// dropped. dense_hadamard provides the brute-force check of exactly this.
namespace semiqm::qsim {

struct WidthError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ConsumedError : std::logic_error {
    using std::logic_error::logic_error;
};

// Fixed-width bit string, w in [1, 64]. Bit 0 is the leftmost/most significant
// bit; the hex form packs big-endian with widths not divisible by 8 zero-padded
// in the low bits of the final byte (so 1010 at w=4 packs as 0xa0).
class BitVec {
public:
    BitVec() = default;
    BitVec(uint64_t value, int width);

    static BitVec random(int width, Rng& rng);
    static BitVec zero(int width) { return BitVec(0, width); }

    int width() const { return width_; }
    uint64_t value() const { return value_; }
    bool is_zero() const { return value_ == 0; }
    int bit(int i) const;  // i = 0 refers to the most significant position

    BitVec operator^(const BitVec& other) const;
    bool operator==(const BitVec& other) const = default;

    Bytes pack() const;
    static BitVec unpack(std::span<const uint8_t> bytes, int width);
    std::string hex() const { return to_hex(pack()); }
    static BitVec from_hex(const std::string& hex, int width);

private:
    uint64_t value_ = 0;
    int width_ = 0;
};

// Inner product mod 2.
int dot(const BitVec& a, const BitVec& b);

// (|0,x0> + |1,x1>)/sqrt(2), measurable exactly once.
class ClawState {
public:
    ClawState(BitVec x0, BitVec x1);

    int width() const { return x0_.width(); }
    bool consumed() const { return consumed_; }

    // Simulation-internal views of the branch labels. Used for persistence and
    // oracle cross-checks; protocol and strategy code extracts information
    // through the measurement operations only.
    const BitVec& branch0() const { return x0_; }
    const BitVec& branch1() const { return x1_; }

    static ClawState restore(BitVec x0, BitVec x1, bool consumed);

    friend std::pair<int, BitVec> measure_standard(ClawState& state, Rng& rng);
    friend std::pair<int, BitVec> measure_hadamard(ClawState& state, Rng& rng);

private:
    BitVec x0_, x1_;
    bool consumed_ = false;
};

// Returns (i, x_i), each branch with probability 1/2. Consumes the state.
std::pair<int, BitVec> measure_standard(ClawState& state, Rng& rng);

// Returns (i, d) with d uniform and i = dot(d, x0 ^ x1). Consumes the state.
std::pair<int, BitVec> measure_hadamard(ClawState& state, Rng& rng);

// Dense statevector over w+1 qubits, label = (i << w) | x. Only built for
// w <= 8; exists to cross-validate the symbolic path.
struct DenseState {
    int qubits = 0;  // w + 1
    std::vector<std::complex<double>> amplitudes;

    double norm_squared() const;
};

DenseState dense_from_claw(const BitVec& x0, const BitVec& x1);
DenseState dense_hadamard(const DenseState& s);
uint64_t dense_sample(const DenseState& s, Rng& rng);

}  // namespace semiqm::qsim
