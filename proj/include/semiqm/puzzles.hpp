#pragma once

#include <vector>

#include "semiqm/ntcf.hpp"
#include "semiqm/qsim.hpp"

// 1-of-2 puzzles over the claw-free family. A puzzle key is a function key;
// committing to an obligation o pins the solver to the two preimages of o, and
// the solver can then answer exactly one of two challenges from its claw state:
// a preimage of o (challenge 0) or a nonzero d with d.(x0^x1) announced
// (challenge 1).
//
// This header is the solver-side surface (what an honest wallet or an adversary
// strategy may touch). Generation and verification need the trapdoor and live
// in puzzles_verify.hpp.
namespace semiqm::puzzles {

struct Puzzle {
    ntcf::FunctionKey key;

    int width() const { return key.width; }
    bool operator==(const Puzzle&) const = default;
};

struct Obligation {
    ntcf::Image image;

    bool operator==(const Obligation&) const = default;
};

enum class AnswerKind { Preimage, Equation };

struct Answer {
    int i = 0;  // announced bit: branch index for preimages, parity for equations
    qsim::BitVec payload;
    AnswerKind kind = AnswerKind::Preimage;

    bool operator==(const Answer&) const = default;
};

using PuzzleVector = std::vector<Puzzle>;
using ObligationVector = std::vector<Obligation>;
using AnswerVector = std::vector<Answer>;
using ChallengeVector = std::vector<uint8_t>;  // one bit per component

// Honest obligation: o distributed as the image of a uniform (b, x), together
// with the claw state holding exactly the two preimages of o.
std::pair<Obligation, qsim::ClawState> obligate(const Puzzle& p, Rng& rng);

// Honest solver: measures the state in the basis the challenge asks for.
// Consumes the state either way.
Answer solve(const Puzzle& p, const Obligation& o, qsim::ClawState& state, int b, Rng& rng);

std::pair<ObligationVector, std::vector<qsim::ClawState>> obligate_n(const PuzzleVector& ps,
                                                                     Rng& rng);

// Shared challenge bit across all components.
AnswerVector solve_n(const PuzzleVector& ps, const ObligationVector& os,
                     std::vector<qsim::ClawState>& states, int b, Rng& rng);

// Independent challenge bit per component.
AnswerVector solve_vec(const PuzzleVector& ps, const ObligationVector& os,
                       std::vector<qsim::ClawState>& states, const ChallengeVector& bs,
                       Rng& rng);

// Repetitions needed to turn an h-hard puzzle into a strong one at security
// level lambda: ceil(log2(lambda)^2 / log2(1/h)).
int strong_repetition_count(double h, int lambda);

}  // namespace semiqm::puzzles
