#include "semiqm/games.hpp"

#include <omp.h>

#include <filesystem>
#include <memory>

namespace semiqm::games {

puzzles::Answer fabricate_equation(int w, Rng& rng) {
    return puzzles::Answer{rng.bit(), qsim::BitVec::random(w, rng),
                           puzzles::AnswerKind::Equation};
}

wire::json GameReport::to_json() const {
    wire::json j;
    j["game"] = game;
    j["strategy"] = strategy;
    j["n"] = n;
    j["w"] = w;
    j["seed"] = seed;
    j["trials"] = trials;
    j["wins"] = wins;
    j["voids"] = voids;
    j["win_rate"] = win_rate();
    j["total_accepts"] = total_accepts;
    j["total_mints"] = total_mints;
    j["total_verifies"] = total_verifies;
    return j;
}

namespace {

struct Ledger {
    uint32_t mints = 0;
    uint32_t verifies = 0;
    uint32_t accepts = 0;
};

struct TrialData {
    TrialOutcome outcome = TrialOutcome::Loss;
    Ledger ledger;
};

// Data-parallel trial loop. The OpenMP and serial paths run the exact same
// per-trial closures on rngs derived from (seed, trial), so their outcome
// vectors are identical; the serial path is kept as the reference.
//
// A cap overrun voids the trial by referee rule. Any other strategy exception
// also voids it (an exception may not escape the parallel region); games that
// expect clean runs assert zero voids.
template <typename Fn>
TrialData guarded(Fn& per_trial, int t) {
    try {
        return per_trial(t);
    } catch (const TrialVoid&) {
    } catch (const std::exception&) {
    }
    TrialData voided;
    voided.outcome = TrialOutcome::Void;
    return voided;
}

template <typename Fn>
std::vector<TrialData> run_trials(int trials, bool parallel, Fn&& per_trial) {
    std::vector<TrialData> results(trials);
    if (parallel) {
        // Static contiguous blocks: no per-iteration dispatch and no false
        // sharing on neighbouring results.
#pragma omp parallel for schedule(static)
        for (int t = 0; t < trials; ++t) results[t] = guarded(per_trial, t);
    } else {
        for (int t = 0; t < trials; ++t) results[t] = guarded(per_trial, t);
    }
    return results;
}

GameReport assemble(std::string game, std::string strategy, int n, int w, uint64_t seed,
                    const std::vector<TrialData>& results) {
    GameReport r;
    r.game = std::move(game);
    r.strategy = std::move(strategy);
    r.n = n;
    r.w = w;
    r.seed = seed;
    r.trials = results.size();
    for (const TrialData& t : results) {
        r.outcomes.push_back(static_cast<uint8_t>(t.outcome));
        if (t.outcome == TrialOutcome::Win) ++r.wins;
        if (t.outcome == TrialOutcome::Void) ++r.voids;
        r.total_accepts += t.ledger.accepts;
        r.total_mints += t.ledger.mints;
        r.total_verifies += t.ledger.verifies;
    }
    return r;
}

// ---- solve2 strategies ----

Solve2Output solve2_honest_fabricate(const puzzles::PuzzleVector& ps, Rng& rng) {
    Solve2Output out;
    for (const puzzles::Puzzle& p : ps) {
        auto [o, state] = puzzles::obligate(p, rng);
        auto [i, x] = qsim::measure_standard(state, rng);
        out.obligations.push_back(o);
        out.preimage_answers.push_back({i, x, puzzles::AnswerKind::Preimage});
        out.equation_answers.push_back(fabricate_equation(p.width(), rng));
    }
    return out;
}

Solve2Output solve2_random(const puzzles::PuzzleVector& ps, Rng& rng) {
    Solve2Output out;
    for (const puzzles::Puzzle& p : ps) {
        int w = p.width();
        out.obligations.push_back({ntcf::Image{qsim::BitVec::random(w, rng)}});
        out.preimage_answers.push_back(
            {rng.bit(), qsim::BitVec::random(w, rng), puzzles::AnswerKind::Preimage});
        out.equation_answers.push_back(fabricate_equation(w, rng));
    }
    return out;
}

// Referee-only sanity arm: with the trapdoor both tests are trivial.
Solve2Output solve2_oracle(const puzzles::PuzzleVector& ps, const puzzles::VerKeyVector& vs,
                           Rng& rng) {
    Solve2Output out;
    for (size_t i = 0; i < ps.size(); ++i) {
        int w = ps[i].width();
        puzzles::Obligation o{ntcf::Image{qsim::BitVec::random(w, rng)}};
        auto [x0, x1] = ntcf::claw_of(vs[i].trapdoor, o.image);
        qsim::BitVec d = qsim::BitVec::random(w, rng);
        out.obligations.push_back(o);
        out.preimage_answers.push_back({0, x0, puzzles::AnswerKind::Preimage});
        out.equation_answers.push_back(
            {qsim::dot(d, x0 ^ x1), d, puzzles::AnswerKind::Equation});
    }
    return out;
}

// ---- mini-scheme referee ----

class MiniRefereePort : public MiniBankPort {
public:
    MiniRefereePort(const money::MiniKey& key, Rng& bank_rng, Ledger& ledger, int mint_cap,
                    int verify_cap)
        : key_(key),
          bank_rng_(bank_rng),
          ledger_(ledger),
          mint_cap_(mint_cap),
          verify_cap_(verify_cap) {}

    wire::PuzzlesBody mint_begin() override {
        if (static_cast<int>(ledger_.mints) >= mint_cap_) throw TrialVoid{};
        ++ledger_.mints;
        mint_.emplace(key_);
        return mint_->puzzles();
    }

    primitives::Tag mint_finish(const wire::ObligationsBody& obligations) override {
        if (!mint_) throw wire::ProtocolError("mint_finish without mint_begin");
        primitives::Tag t = mint_->on_obligations(obligations);
        mint_.reset();
        return t;
    }

    VerifySession verify_begin() override {
        if (static_cast<int>(ledger_.verifies) >= verify_cap_) throw TrialVoid{};
        ++ledger_.verifies;
        int sid = static_cast<int>(verifies_.size());
        verifies_.emplace_back(key_);
        return {sid, verifies_.back().challenge(bank_rng_)};
    }

    bool verify_finish(int sid, const wire::AnswersBody& answers) override {
        bool r = verifies_.at(sid).on_answers(answers);
        if (r) ++ledger_.accepts;
        return r;
    }

private:
    const money::MiniKey& key_;
    Rng& bank_rng_;
    Ledger& ledger_;
    int mint_cap_;
    int verify_cap_;
    std::optional<money::MiniMintBank> mint_;
    std::deque<money::MiniVerifyBank> verifies_;
};

wire::AnswersBody answers_from(const money::MiniBanknote& note, puzzles::AnswerVector as) {
    wire::AnswersBody body;
    body.w = note.w;
    body.obligations = note.obligations;
    body.tag = note.tag;
    body.answers = std::move(as);
    return body;
}

money::MiniBanknote port_mint_honest(MiniBankPort& port, Rng& rng) {
    money::MiniMintUser user;
    wire::ObligationsBody obligations = user.on_puzzles(port.mint_begin(), rng);
    return user.on_tag(port.mint_finish(obligations));
}

wire::AnswersBody honest_answers(money::MiniBanknote& note, const wire::ChallengeBody& challenge,
                                 Rng& rng) {
    money::MiniVerifyUser user(note);
    return user.on_challenge(challenge, rng);
}

// Verify once honestly, then verify again replaying the recorded answers; the
// second accept requires the fresh challenge vector to collide with the first.
void mini_replay(MiniBankPort& port, Rng& rng, int replays) {
    money::MiniBanknote note = port_mint_honest(port, rng);
    auto first = port.verify_begin();
    wire::AnswersBody answers = honest_answers(note, first.challenge, rng);
    port.verify_finish(first.sid, answers);
    for (int r = 0; r < replays; ++r) {
        auto again = port.verify_begin();
        port.verify_finish(again.sid, answers);
    }
}

// Open both verify sessions before answering either. Colliding positions are
// answered honestly once and reused; differing positions answer the preimage
// challenge from a standard measurement and fabricate the equation answer.
void mini_split(MiniBankPort& port, Rng& rng) {
    money::MiniBanknote note = port_mint_honest(port, rng);
    auto s1 = port.verify_begin();
    auto s2 = port.verify_begin();
    const auto& b1 = s1.challenge.bits;
    const auto& b2 = s2.challenge.bits;
    puzzles::AnswerVector a1, a2;
    for (int i = 0; i < note.n; ++i) {
        if (b1[i] == b2[i]) {
            puzzles::Answer a =
                puzzles::solve(puzzles::Puzzle{}, note.obligations[i], note.states[i],
                               b1[i] & 1, rng);
            a1.push_back(a);
            a2.push_back(a);
        } else {
            auto [j, x] = qsim::measure_standard(note.states[i], rng);
            puzzles::Answer pre{j, x, puzzles::AnswerKind::Preimage};
            puzzles::Answer eq = fabricate_equation(note.w, rng);
            a1.push_back(b1[i] == 0 ? pre : eq);
            a2.push_back(b2[i] == 0 ? pre : eq);
        }
    }
    port.verify_finish(s1.sid, answers_from(note, std::move(a1)));
    port.verify_finish(s2.sid, answers_from(note, std::move(a2)));
}

void mini_honest(MiniBankPort& port, Rng& rng) {
    money::MiniBanknote note = port_mint_honest(port, rng);
    auto session = port.verify_begin();
    port.verify_finish(session.sid, honest_answers(note, session.challenge, rng));
}

// ---- full-scheme referee (over the wire dispatcher) ----

class FullWirePort : public FullBankPort {
public:
    FullWirePort(wire::Transport& transport, Rng& id_rng, Ledger& ledger, int mint_cap,
                 int verify_cap)
        : transport_(transport),
          id_rng_(id_rng),
          ledger_(ledger),
          mint_cap_(mint_cap),
          verify_cap_(verify_cap) {}

    MintSession mint_begin() override {
        if (static_cast<int>(ledger_.mints) >= mint_cap_) throw TrialVoid{};
        ++ledger_.mints;
        Sess s{wire::fresh_session_id(id_rng_), 2};
        transport_.send({s.id, 0, wire::MsgType::MintInit, wire::json::object()});
        wire::WireMessage reply = expect(wire::MsgType::Puzzles);
        int sid = static_cast<int>(sessions_.size());
        sessions_.push_back(s);
        return {sid, wire::puzzles_body(reply.body)};
    }

    wire::TagNoteBody mint_finish(int sid, const wire::ObligationsBody& obligations) override {
        Sess& s = sessions_.at(sid);
        transport_.send({s.id, s.next_seq, wire::MsgType::Obligations, wire::to_json(obligations)});
        return wire::tag_note_body(expect(wire::MsgType::TagNote).body);
    }

    VerifySession verify_begin(const wire::VerifyInitBody& init) override {
        if (static_cast<int>(ledger_.verifies) >= verify_cap_) throw TrialVoid{};
        ++ledger_.verifies;
        Sess s{wire::fresh_session_id(id_rng_), 2};
        transport_.send({s.id, 0, wire::MsgType::VerifyInit, wire::to_json(init)});
        wire::WireMessage reply = transport_.recv();
        int sid = static_cast<int>(sessions_.size());
        sessions_.push_back(s);
        if (reply.type == wire::MsgType::Result) {
            wire::ResultBody r = wire::result_body(reply.body);
            if (r.accepted) ++ledger_.accepts;  // cannot happen at init, kept for symmetry
            return {sid, std::nullopt};
        }
        if (reply.type != wire::MsgType::Challenge) {
            throw wire::ProtocolError("unexpected reply to VERIFY_INIT");
        }
        return {sid, wire::challenge_body(reply.body)};
    }

    bool verify_finish(int sid, const wire::AnswersBody& answers) override {
        Sess& s = sessions_.at(sid);
        transport_.send({s.id, s.next_seq, wire::MsgType::Answers, wire::to_json(answers)});
        wire::ResultBody r = wire::result_body(expect(wire::MsgType::Result).body);
        if (r.accepted) ++ledger_.accepts;
        return r.accepted;
    }

private:
    struct Sess {
        std::string id;
        uint64_t next_seq = 2;
    };

    wire::WireMessage expect(wire::MsgType type) {
        wire::WireMessage m = transport_.recv();
        if (m.type != type) {
            throw wire::ProtocolError(std::string("unexpected reply, wanted ") +
                                      wire::type_name(type));
        }
        return m;
    }

    wire::Transport& transport_;
    Rng& id_rng_;
    Ledger& ledger_;
    int mint_cap_;
    int verify_cap_;
    std::vector<Sess> sessions_;
};

money::FullBanknote full_port_mint_honest(FullBankPort& port, Rng& rng) {
    auto session = port.mint_begin();
    money::FullMintUser user;
    wire::ObligationsBody obligations = user.on_puzzles(session.puzzles, rng);
    return user.on_tag_note(port.mint_finish(session.sid, obligations));
}

bool full_port_verify_honest(FullBankPort& port, money::FullBanknote& note, Rng& rng,
                             wire::VerifyInitBody* init_out = nullptr,
                             wire::AnswersBody* answers_out = nullptr) {
    money::FullVerifyUser user(note);
    wire::VerifyInitBody init = user.init();
    if (init_out) *init_out = init;
    auto session = port.verify_begin(init);
    if (!session.challenge) return false;
    wire::AnswersBody answers = user.on_challenge(*session.challenge, rng);
    if (answers_out) *answers_out = answers;
    return port.verify_finish(session.sid, answers);
}

// l honest notes, all spent honestly, then each spent transcript replayed once
// against a fresh challenge.
void full_replay(FullBankPort& port, Rng& rng, int notes) {
    std::vector<money::FullBanknote> minted;
    for (int i = 0; i < notes; ++i) minted.push_back(full_port_mint_honest(port, rng));
    std::vector<std::pair<wire::VerifyInitBody, wire::AnswersBody>> transcripts;
    for (auto& note : minted) {
        wire::VerifyInitBody init;
        wire::AnswersBody answers;
        full_port_verify_honest(port, note, rng, &init, &answers);
        transcripts.emplace_back(std::move(init), std::move(answers));
    }
    for (const auto& [init, answers] : transcripts) {
        auto session = port.verify_begin(init);
        if (session.challenge) port.verify_finish(session.sid, answers);
    }
}

// Single-bit tamper of the wrapped key or its tag; the MAC check must reject
// at init, before any challenge is issued.
void full_tamper(FullBankPort& port, Rng& rng) {
    money::FullBanknote note = full_port_mint_honest(port, rng);
    money::FullVerifyUser user(note);
    wire::VerifyInitBody init = user.init();
    Bytes raw = init.wrapped_key.serialize();
    uint64_t total_bits = (raw.size() + 32) * 8;
    uint64_t target = rng.below(total_bits);
    if (target < raw.size() * 8) {
        raw[target / 8] ^= static_cast<uint8_t>(1u << (target % 8));
        init.wrapped_key = primitives::Ciphertext::parse(raw);
    } else {
        uint64_t bit = target - raw.size() * 8;
        init.wrapped_tag.bytes[bit / 8] ^= static_cast<uint8_t>(1u << (bit % 8));
    }
    auto session = port.verify_begin(init);
    if (session.challenge) {
        // Should be unreachable; answer honestly so a MAC bypass surfaces as
        // an accept in the report.
        wire::AnswersBody answers = user.on_challenge(*session.challenge, rng);
        port.verify_finish(session.sid, answers);
    }
}

void full_honest(FullBankPort& port, Rng& rng, int notes) {
    std::vector<money::FullBanknote> minted;
    for (int i = 0; i < notes; ++i) minted.push_back(full_port_mint_honest(port, rng));
    for (auto& note : minted) full_port_verify_honest(port, note, rng);
}

}  // namespace

// ---- runners ----

GameReport run_solve2(const Solve2Strategy& strategy, const std::string& name, int n, int w,
                      int trials, uint64_t seed, bool parallel) {
    auto per_trial = [&](int t) {
        TrialData data;
        Rng referee_rng = Rng::derive(seed, 2 * static_cast<uint64_t>(t));
        Rng adv_rng = Rng::derive(seed, 2 * static_cast<uint64_t>(t) + 1);
        auto [ps, vs] = puzzles::gen_n(n, w, referee_rng);
        Solve2Output out = strategy(ps, adv_rng);
        data.ledger.verifies = 1;
        bool win = out.obligations.size() == static_cast<size_t>(n) &&
                   out.preimage_answers.size() == static_cast<size_t>(n) &&
                   out.equation_answers.size() == static_cast<size_t>(n);
        for (int i = 0; win && i < n; ++i) {
            win = puzzles::verify2(ps[i], vs[i], out.obligations[i], out.preimage_answers[i],
                                   out.equation_answers[i]);
        }
        if (win) data.ledger.accepts = 1;
        data.outcome = win ? TrialOutcome::Win : TrialOutcome::Loss;
        return data;
    };
    return assemble("solve2", name, n, w, seed, run_trials(trials, parallel, per_trial));
}

GameReport run_solve2(const std::string& strategy, int n, int w, int trials, uint64_t seed,
                      bool parallel) {
    if (strategy == "honest_fabricate") {
        return run_solve2(Solve2Strategy(solve2_honest_fabricate), strategy, n, w, trials, seed,
                          parallel);
    }
    if (strategy == "random") {
        return run_solve2(Solve2Strategy(solve2_random), strategy, n, w, trials, seed, parallel);
    }
    if (strategy == "oracle") {
        // The oracle arm runs inside the referee: it needs the verification
        // keys, which no adversary strategy can receive.
        auto per_trial = [&](int t) {
            TrialData data;
            Rng referee_rng = Rng::derive(seed, 2 * static_cast<uint64_t>(t));
            Rng adv_rng = Rng::derive(seed, 2 * static_cast<uint64_t>(t) + 1);
            auto [ps, vs] = puzzles::gen_n(n, w, referee_rng);
            Solve2Output out = solve2_oracle(ps, vs, adv_rng);
            data.ledger.verifies = 1;
            bool win = true;
            for (int i = 0; win && i < n; ++i) {
                win = puzzles::verify2(ps[i], vs[i], out.obligations[i], out.preimage_answers[i],
                                       out.equation_answers[i]);
            }
            if (win) data.ledger.accepts = 1;
            data.outcome = win ? TrialOutcome::Win : TrialOutcome::Loss;
            return data;
        };
        return assemble("solve2", strategy, n, w, seed, run_trials(trials, parallel, per_trial));
    }
    throw std::invalid_argument("unknown solve2 strategy: " + strategy);
}

static GameReport run_mini_game(const char* game, const MiniStrategy& strategy,
                                const std::string& name, const GameParams& params,
                                int mint_cap, int verify_cap, bool require_v2) {
    auto per_trial = [&](int t) {
        TrialData data;
        Rng referee_rng = Rng::derive(params.seed, 3 * static_cast<uint64_t>(t));
        Rng adv_rng = Rng::derive(params.seed, 3 * static_cast<uint64_t>(t) + 1);
        money::MiniKey key = money::mini_keygen(params.lambda, referee_rng, params.n, params.w);
        MiniRefereePort port(key, referee_rng, data.ledger, mint_cap, verify_cap);
        strategy(port, adv_rng);
        bool win = data.ledger.accepts > data.ledger.mints && data.ledger.mints == 1;
        if (require_v2) win = win && data.ledger.verifies == 2;
        data.outcome = win ? TrialOutcome::Win : TrialOutcome::Loss;
        return data;
    };
    return assemble(game, name, params.n, params.w, params.seed,
                    run_trials(params.trials, params.parallel, per_trial));
}

GameReport run_counterfeit_2of2(const MiniStrategy& strategy, const std::string& name,
                                const GameParams& params) {
    return run_mini_game("counterfeit_2of2", strategy, name, params, /*mint_cap=*/1,
                         /*verify_cap=*/2, /*require_v2=*/true);
}

GameReport run_counterfeit_2of2(const std::string& strategy, const GameParams& params) {
    if (strategy == "replay") {
        return run_counterfeit_2of2(
            MiniStrategy([](MiniBankPort& port, Rng& rng) { mini_replay(port, rng, 1); }),
            strategy, params);
    }
    if (strategy == "split") {
        return run_counterfeit_2of2(MiniStrategy(mini_split), strategy, params);
    }
    if (strategy == "honest") {
        return run_counterfeit_2of2(MiniStrategy(mini_honest), strategy, params);
    }
    throw std::invalid_argument("unknown 2of2 strategy: " + strategy);
}

GameReport run_counterfeit_mini(const MiniStrategy& strategy, const std::string& name,
                                const GameParams& params) {
    return run_mini_game("counterfeit_mini", strategy, name, params, /*mint_cap=*/1,
                         params.verify_cap, /*require_v2=*/false);
}

GameReport run_counterfeit_mini(const std::string& strategy, const GameParams& params) {
    if (strategy == "replay_many") {
        int replays = params.verify_cap - 1;
        return run_counterfeit_mini(
            MiniStrategy([replays](MiniBankPort& port, Rng& rng) {
                mini_replay(port, rng, replays);
            }),
            strategy, params);
    }
    if (strategy == "honest") {
        return run_counterfeit_mini(MiniStrategy(mini_honest), strategy, params);
    }
    throw std::invalid_argument("unknown mini strategy: " + strategy);
}

GameReport run_counterfeit_full(const FullStrategy& strategy, const std::string& name,
                                const GameParams& params, wire::Transport* live) {
    bool parallel = params.parallel && live == nullptr;
    auto per_trial = [&](int t) {
        TrialData data;
        Rng setup_rng = Rng::derive(params.seed, 4 * static_cast<uint64_t>(t));
        Rng adv_rng = Rng::derive(params.seed, 4 * static_cast<uint64_t>(t) + 1);
        std::optional<bank::Bank> local_bank;
        std::optional<bank::LoopbackTransport> loopback;
        wire::Transport* transport = live;
        if (!transport) {
            bank::BankKeyFile keyfile =
                bank::BankKeyFile::generate(params.lambda, params.n, params.w, setup_rng);
            bank::BankConfig cfg;
            cfg.lambda = params.lambda;
            cfg.n = params.n;
            cfg.w = params.w;
            local_bank.emplace(keyfile, cfg, setup_rng.next_u64());
            loopback.emplace(*local_bank);
            transport = &*loopback;
        }
        FullWirePort port(*transport, adv_rng, data.ledger, params.mint_cap, params.verify_cap);
        strategy(port, adv_rng);
        bool win = data.ledger.accepts > data.ledger.mints;
        data.outcome = win ? TrialOutcome::Win : TrialOutcome::Loss;
        return data;
    };
    return assemble("counterfeit_full", name, params.n, params.w, params.seed,
                    run_trials(params.trials, parallel, per_trial));
}

GameReport run_counterfeit_full(const std::string& strategy, const GameParams& params,
                                wire::Transport* live) {
    int notes = std::min(params.mint_cap, 5);
    if (strategy == "replay") {
        return run_counterfeit_full(
            FullStrategy([notes](FullBankPort& port, Rng& rng) {
                full_replay(port, rng, notes);
            }),
            strategy, params, live);
    }
    if (strategy == "tamper") {
        return run_counterfeit_full(FullStrategy(full_tamper), strategy, params, live);
    }
    if (strategy == "honest") {
        return run_counterfeit_full(
            FullStrategy([notes](FullBankPort& port, Rng& rng) {
                full_honest(port, rng, notes);
            }),
            strategy, params, live);
    }
    throw std::invalid_argument("unknown full strategy: " + strategy);
}

GameReport run_public_exclusivity(const GameParams& params, const std::string& scratch_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(scratch_dir);
    auto per_trial = [&](int t) {
        TrialData data;
        Rng rng = Rng::derive(params.seed, static_cast<uint64_t>(t));
        std::string db_path =
            scratch_dir + "/spent_" + std::to_string(params.seed) + "_" + std::to_string(t) +
            ".db";
        fs::remove(db_path);
        bank::BankKeyFile keyfile = bank::BankKeyFile::generate(params.lambda, {}, {}, rng);
        bank::BankConfig cfg;
        cfg.spent_db_path = db_path;
        auto bank_box = std::make_unique<bank::Bank>(keyfile, cfg, rng.next_u64());
        lightning::PublicKeyBundle pk = keyfile.public_bundle();

        struct NoteRecord {
            lightning::PublicBanknote note;
            lightning::Bolt pristine;  // copied at mint: the toy bolt is copyable
            std::optional<wire::PSpendBody> accepted_spend;
            int accept_count = 0;
        };
        std::vector<NoteRecord> notes;
        bool violation = false;

        auto exchange = [&](const wire::WireMessage& msg) {
            bank::LoopbackTransport t2(*bank_box);
            t2.send(msg);
            return t2.recv();
        };
        auto spend = [&](const wire::PSpendBody& body) {
            ++data.ledger.verifies;
            wire::WireMessage reply =
                exchange({wire::fresh_session_id(rng), 0, wire::MsgType::PSpend,
                          wire::to_json(body)});
            bool accepted = reply.type == wire::MsgType::Result &&
                            wire::result_body(reply.body).accepted;
            if (accepted) ++data.ledger.accepts;
            return accepted;
        };

        int ops = 30;
        for (int op = 0; op < ops; ++op) {
            switch (rng.below(6)) {
                case 0: {  // mint
                    if (notes.size() >= 6) break;
                    ++data.ledger.mints;
                    lightning::PublicBanknote note;
                    note.bolt = lightning::gen_bolt(pk.suite, rng);
                    note.serial = note.bolt.serial;
                    wire::WireMessage reply = exchange(
                        {wire::fresh_session_id(rng), 0, wire::MsgType::PMintSerial,
                         wire::to_json(wire::PMintSerialBody{note.serial})});
                    if (reply.type != wire::MsgType::PSignature) {
                        violation = true;
                        break;
                    }
                    note.signature = wire::p_signature_body(reply.body).signature;
                    notes.push_back({note, note.bolt, std::nullopt, 0});
                    break;
                }
                case 1: {  // qverify: must pass exactly when the bolt is intact
                    if (notes.empty()) break;
                    NoteRecord& r = notes[rng.below(notes.size())];
                    bool ok = lightning::p_qverify(pk, r.note);
                    if (ok != !r.note.bolt.consumed) violation = true;
                    break;
                }
                case 2: {  // first spend of an unspent note
                    for (auto& r : notes) {
                        if (r.note.bolt.consumed) continue;
                        wire::PSpendBody body = lightning::p_cverify_user(pk, r.note);
                        bool accepted = spend(body);
                        if (accepted) {
                            ++r.accept_count;
                            r.accepted_spend = body;
                        } else {
                            violation = true;  // honest first spend must pass
                        }
                        break;
                    }
                    break;
                }
                case 3: {  // replay of a previously accepted spend
                    for (auto& r : notes) {
                        if (!r.accepted_spend) continue;
                        if (spend(*r.accepted_spend)) ++r.accept_count;
                        break;
                    }
                    break;
                }
                case 4: {  // spend a pristine copy of an already-spent bolt
                    for (auto& r : notes) {
                        if (!r.accepted_spend) continue;
                        lightning::PublicBanknote copy = r.note;
                        copy.bolt = r.pristine;
                        wire::PSpendBody body = lightning::p_cverify_user(pk, copy);
                        if (spend(body)) ++r.accept_count;
                        break;
                    }
                    break;
                }
                case 5: {  // bank restart over the same durable state
                    bank_box = std::make_unique<bank::Bank>(keyfile, cfg, rng.next_u64());
                    break;
                }
            }
        }
        bool double_spent = false;
        for (const auto& r : notes) {
            if (r.accept_count > 1) double_spent = true;
        }
        data.outcome = double_spent ? TrialOutcome::Win
                       : violation  ? TrialOutcome::Void
                                    : TrialOutcome::Loss;
        return data;
    };
    return assemble("public_exclusivity", "interleaved", params.n, params.w, params.seed,
                    run_trials(params.trials, params.parallel, per_trial));
}

std::vector<std::string> game_names() {
    return {"solve2", "counterfeit_2of2", "counterfeit_mini", "counterfeit_full",
            "public_exclusivity"};
}

std::vector<std::string> strategies_for(const std::string& game) {
    if (game == "solve2") return {"honest_fabricate", "random", "oracle"};
    if (game == "counterfeit_2of2") return {"replay", "split", "honest"};
    if (game == "counterfeit_mini") return {"replay_many", "honest"};
    if (game == "counterfeit_full") return {"replay", "tamper", "honest"};
    if (game == "public_exclusivity") return {"interleaved"};
    throw std::invalid_argument("unknown game: " + game);
}

GameReport run_game(const std::string& game, const std::string& strategy,
                    const GameParams& params, const std::string& scratch_dir) {
    if (game == "solve2") {
        return run_solve2(strategy, params.n, params.w, params.trials, params.seed,
                          params.parallel);
    }
    if (game == "counterfeit_2of2") return run_counterfeit_2of2(strategy, params);
    if (game == "counterfeit_mini") return run_counterfeit_mini(strategy, params);
    if (game == "counterfeit_full") return run_counterfeit_full(strategy, params);
    if (game == "public_exclusivity") return run_public_exclusivity(params, scratch_dir);
    throw std::invalid_argument("unknown game: " + game);
}

}  // namespace semiqm::games
