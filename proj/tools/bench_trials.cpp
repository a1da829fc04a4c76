// Compares the serial reference trial loop against the OpenMP one for the
// statistically heavy games, and checks that both produce the same outcomes.
//
//   bench_trials [trials] [seed]

#include <omp.h>

#include <chrono>
#include <cstdio>

#include "semiqm/games.hpp"

using namespace semiqm;
using Clock = std::chrono::steady_clock;

static double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

template <typename Fn>
static void bench(const char* name, Fn&& run) {
    auto t0 = Clock::now();
    games::GameReport serial = run(false);
    double serial_s = seconds_since(t0);

    t0 = Clock::now();
    games::GameReport parallel = run(true);
    double parallel_s = seconds_since(t0);

    bool same = serial.outcomes == parallel.outcomes && serial.wins == parallel.wins;
    std::printf("%-24s serial %8.3fs   omp(%d) %8.3fs   speedup %5.2fx   outcomes %s\n", name,
                serial_s, omp_get_max_threads(), parallel_s, serial_s / parallel_s,
                same ? "identical" : "DIFFER");
}

int main(int argc, char** argv) {
    int trials = argc > 1 ? std::atoi(argv[1]) : 4000;
    uint64_t seed = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 7;

    games::GameParams params;
    params.trials = trials;
    params.seed = seed;
    params.n = 8;
    params.w = 16;

    bench("solve2/honest_fabricate", [&](bool parallel) {
        return games::run_solve2("honest_fabricate", 1, params.w, trials, seed, parallel);
    });
    bench("2of2/replay", [&](bool parallel) {
        games::GameParams p = params;
        p.parallel = parallel;
        return games::run_counterfeit_2of2("replay", p);
    });
    bench("2of2/split", [&](bool parallel) {
        games::GameParams p = params;
        p.parallel = parallel;
        return games::run_counterfeit_2of2("split", p);
    });
    bench("mini/replay_many", [&](bool parallel) {
        games::GameParams p = params;
        p.parallel = parallel;
        p.trials = trials / 4;
        return games::run_counterfeit_mini("replay_many", p);
    });
    bench("full/replay", [&](bool parallel) {
        games::GameParams p = params;
        p.parallel = parallel;
        p.trials = trials / 8;
        p.mint_cap = 5;
        p.verify_cap = 16;
        return games::run_counterfeit_full("replay", p);
    });
    return 0;
}
