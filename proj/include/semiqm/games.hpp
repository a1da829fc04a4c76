#pragma once

#include "semiqm/bank.hpp"
#include "semiqm/games_strategy.hpp"
#include "semiqm/money_private.hpp"

// Referee side of the security games. Each runner plays `trials` independent
// games, every trial seeded from (seed, trial index), and reports bank-side
// counts only: w accepted verifications, l mints, v verification attempts.
//
// Trials are data-parallel; every runner has an OpenMP path and a serial path
// that produce identical per-trial outcomes (the serial path is the reference
// the equivalence tests and the benchmark compare against).
namespace semiqm::games {

struct GameParams {
    int n = 8;
    int w = 16;
    int lambda = 256;
    int trials = 1000;
    uint64_t seed = 1;
    int verify_cap = 64;
    int mint_cap = 8;
    bool parallel = true;
};

enum class TrialOutcome : uint8_t { Loss = 0, Win = 1, Void = 2 };

struct GameReport {
    std::string game;
    std::string strategy;
    int n = 0;
    int w = 0;
    uint64_t seed = 0;
    uint64_t trials = 0;
    uint64_t wins = 0;
    uint64_t voids = 0;
    uint64_t total_accepts = 0;   // summed w over trials
    uint64_t total_mints = 0;     // summed l
    uint64_t total_verifies = 0;  // summed v
    std::vector<uint8_t> outcomes;

    double win_rate() const { return trials ? static_cast<double>(wins) / trials : 0.0; }
    wire::json to_json() const;
};

// The 2-of-2 solving game on the n-fold repeated puzzle (n = 1 gives the
// single-puzzle game). Strategies: "honest_fabricate" (standard measurement
// plus a fabricated equation), "random", and "oracle" (referee-only sanity arm
// that answers from the trapdoor).
GameReport run_solve2(const std::string& strategy, int n, int w, int trials, uint64_t seed,
                      bool parallel = true);
GameReport run_solve2(const Solve2Strategy& strategy, const std::string& name, int n, int w,
                      int trials, uint64_t seed, bool parallel = true);

// One mint, exactly two verifications; win iff both accepted.
// Strategies: "replay", "split", "honest".
GameReport run_counterfeit_2of2(const std::string& strategy, const GameParams& params);
GameReport run_counterfeit_2of2(const MiniStrategy& strategy, const std::string& name,
                                const GameParams& params);

// One mint, up to verify_cap verifications; win iff more than one accepted.
// Strategies: "replay_many", "honest".
GameReport run_counterfeit_mini(const std::string& strategy, const GameParams& params);
GameReport run_counterfeit_mini(const MiniStrategy& strategy, const std::string& name,
                                const GameParams& params);

// Full-scheme game over the wire dispatcher; win iff w > l. With a live
// transport the trials run serially over that connection; otherwise each trial
// gets its own in-process bank. Strategies: "replay", "tamper", "honest".
GameReport run_counterfeit_full(const std::string& strategy, const GameParams& params,
                                wire::Transport* live = nullptr);
GameReport run_counterfeit_full(const FullStrategy& strategy, const std::string& name,
                                const GameParams& params,
                                wire::Transport* live = nullptr);

// Randomized interleavings of public-scheme mint/qverify/cverify with bank
// restarts; win = any serial accepted by cverify twice. Needs a scratch
// directory for the per-trial spent-serial files.
GameReport run_public_exclusivity(const GameParams& params, const std::string& scratch_dir);

std::vector<std::string> game_names();
std::vector<std::string> strategies_for(const std::string& game);
// Dispatch by name; scratch_dir is only used by public_exclusivity.
GameReport run_game(const std::string& game, const std::string& strategy,
                    const GameParams& params, const std::string& scratch_dir);

}  // namespace semiqm::games
