#include "semiqm/puzzles_verify.hpp"

#include <cmath>
#include <stdexcept>

namespace semiqm::puzzles {

std::pair<Obligation, qsim::ClawState> obligate(const Puzzle& p, Rng& rng) {
    // The image of a uniform (b, x) under an exactly 2-to-1 bijective-branch
    // family is a uniform y, so sample y directly and take its claw.
    ntcf::Trapdoor view = ntcf::detail::trapdoor_view(p.key);
    Obligation o{ntcf::Image{qsim::BitVec::random(p.width(), rng)}};
    auto [x0, x1] = ntcf::claw_of(view, o.image);
    return {o, qsim::ClawState(x0, x1)};
}

Answer solve(const Puzzle&, const Obligation&, qsim::ClawState& state, int b, Rng& rng) {
    if (b == 0) {
        auto [i, x] = qsim::measure_standard(state, rng);
        return Answer{i, x, AnswerKind::Preimage};
    }
    auto [i, d] = qsim::measure_hadamard(state, rng);
    return Answer{i, d, AnswerKind::Equation};
}

std::pair<ObligationVector, std::vector<qsim::ClawState>> obligate_n(const PuzzleVector& ps,
                                                                     Rng& rng) {
    ObligationVector os;
    std::vector<qsim::ClawState> states;
    os.reserve(ps.size());
    states.reserve(ps.size());
    for (const Puzzle& p : ps) {
        auto [o, state] = obligate(p, rng);
        os.push_back(o);
        states.push_back(std::move(state));
    }
    return {std::move(os), std::move(states)};
}

AnswerVector solve_n(const PuzzleVector& ps, const ObligationVector& os,
                     std::vector<qsim::ClawState>& states, int b, Rng& rng) {
    ChallengeVector bs(ps.size(), static_cast<uint8_t>(b & 1));
    return solve_vec(ps, os, states, bs, rng);
}

AnswerVector solve_vec(const PuzzleVector& ps, const ObligationVector& os,
                       std::vector<qsim::ClawState>& states, const ChallengeVector& bs,
                       Rng& rng) {
    if (ps.size() != os.size() || ps.size() != states.size() || ps.size() != bs.size()) {
        throw std::invalid_argument("solve_vec length mismatch");
    }
    AnswerVector as;
    as.reserve(ps.size());
    for (size_t i = 0; i < ps.size(); ++i) {
        as.push_back(solve(ps[i], os[i], states[i], bs[i] & 1, rng));
    }
    return as;
}

int strong_repetition_count(double h, int lambda) {
    if (!(h > 0.0 && h < 1.0)) throw std::invalid_argument("h must be in (0,1)");
    if (lambda < 1) throw std::invalid_argument("lambda must be positive");
    double lg = std::log2(static_cast<double>(lambda));
    return static_cast<int>(std::ceil(lg * lg / std::log2(1.0 / h)));
}

std::pair<Puzzle, VerKey> gen(int width, Rng& rng) {
    auto [k, t] = ntcf::keygen_f(width, rng);
    return {Puzzle{k}, VerKey{t}};
}

std::pair<PuzzleVector, VerKeyVector> gen_n(int n, int width, Rng& rng) {
    PuzzleVector ps;
    VerKeyVector vs;
    ps.reserve(n);
    vs.reserve(n);
    for (int i = 0; i < n; ++i) {
        auto [p, v] = gen(width, rng);
        ps.push_back(p);
        vs.push_back(v);
    }
    return {std::move(ps), std::move(vs)};
}

bool verify(const Puzzle& p, const VerKey& v, const Obligation& o, int b, const Answer& a) {
    int w = p.width();
    if (o.image.y.width() != w) return false;
    if (a.payload.width() != w) return false;
    if (a.i != 0 && a.i != 1) return false;
    if (b == 0) {
        if (a.kind != AnswerKind::Preimage) return false;
        return a.payload == ntcf::invert(v.trapdoor, a.i, o.image);
    }
    if (a.kind != AnswerKind::Equation) return false;
    auto [x0, x1] = ntcf::claw_of(v.trapdoor, o.image);
    if (!ntcf::good_set_member(v.trapdoor, 0, x0, a.payload) ||
        !ntcf::good_set_member(v.trapdoor, 1, x1, a.payload)) {
        return false;
    }
    return qsim::dot(a.payload, x0 ^ x1) == a.i;
}

bool verify2(const Puzzle& p, const VerKey& v, const Obligation& o, const Answer& a0,
             const Answer& a1) {
    return verify(p, v, o, 0, a0) && verify(p, v, o, 1, a1);
}

bool verify_n(const PuzzleVector& ps, const VerKeyVector& vs, const ObligationVector& os,
              int b, const AnswerVector& as) {
    ChallengeVector bs(ps.size(), static_cast<uint8_t>(b & 1));
    return verify_vec(ps, vs, os, bs, as);
}

bool verify_vec(const PuzzleVector& ps, const VerKeyVector& vs, const ObligationVector& os,
                const ChallengeVector& bs, const AnswerVector& as) {
    if (ps.size() != vs.size() || ps.size() != os.size() || ps.size() != bs.size()) {
        throw std::invalid_argument("verify_vec key vector length mismatch");
    }
    if (as.size() != ps.size()) return false;
    for (size_t i = 0; i < ps.size(); ++i) {
        if (!verify(ps[i], vs[i], os[i], bs[i] & 1, as[i])) return false;
    }
    return true;
}

bool weakly_verifiable_view(const Puzzle& p, const VerKey& v, const Obligation& o,
                            const Answer& a0, const Answer& a1) {
    return verify2(p, v, o, a0, a1);
}

}  // namespace semiqm::puzzles
