// Command-line front end: bank key management, the bank service, a wallet
// against a live or in-process bank, and the security game harness.
//
// Exit codes: 0 ok, 2 rejected/burned, 3 protocol error, 4 storage error.

#include <CLI11.hpp>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include "semiqm/games.hpp"
#include "semiqm/server.hpp"
#include "semiqm/wallet.hpp"

using namespace semiqm;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRejected = 2;
constexpr int kExitProtocol = 3;
constexpr int kExitStorage = 4;

std::optional<uint64_t> env_u64(const char* name) {
    const char* v = std::getenv(name);
    if (!v || !*v) return std::nullopt;
    return std::strtoull(v, nullptr, 10);
}

std::optional<int> env_int(const char* name) {
    auto v = env_u64(name);
    if (!v) return std::nullopt;
    return static_cast<int>(*v);
}

// Precedence: command-line flag, then environment, then key-file/default.
template <typename T>
std::optional<T> resolve(const std::optional<T>& flag, const std::optional<T>& env,
                         const std::optional<T>& file = std::nullopt) {
    if (flag) return flag;
    if (env) return env;
    return file;
}

uint64_t pick_seed(const std::optional<uint64_t>& flag) {
    if (auto s = resolve(flag, env_u64("SEMIQM_SEED"))) return *s;
    return std::random_device{}();
}

struct BankEndpoint {
    std::string connect;  // host:port, empty for in-process
    std::string keyfile;
    std::string spent_db;

    // In-process bank when no --connect was given.
    std::unique_ptr<bank::Bank> local;
    std::unique_ptr<wire::Transport> transport;
    lightning::PublicKeyBundle pk;

    void open(uint64_t seed, std::optional<int> n, std::optional<int> w,
              std::optional<int> lambda) {
        if (!connect.empty()) {
            auto colon = connect.rfind(':');
            if (colon == std::string::npos) throw wire::ProtocolError("--connect wants host:port");
            transport = std::make_unique<server::SocketTransport>(server::SocketTransport::connect(
                connect.substr(0, colon), std::stoi(connect.substr(colon + 1))));
            return;
        }
        if (keyfile.empty()) {
            throw wire::ProtocolError("either --connect or --keyfile is required");
        }
        bank::BankKeyFile kf = bank::BankKeyFile::load(keyfile);
        bank::BankConfig cfg;
        cfg.lambda = lambda.value_or(kf.lambda);
        cfg.n = n ? n : kf.n;
        cfg.w = w ? w : kf.w;
        cfg.spent_db_path = spent_db;
        local = std::make_unique<bank::Bank>(kf, cfg, seed ^ 0xb4a2c0de);
        transport = std::make_unique<bank::LoopbackTransport>(*local);
        pk = kf.public_bundle();
    }
};

void print_report(const games::GameReport& report, bool as_json) {
    if (as_json) {
        std::cout << report.to_json().dump(2) << "\n";
        return;
    }
    std::cout << "game       " << report.game << "\n"
              << "strategy   " << report.strategy << "\n"
              << "n, w       " << report.n << ", " << report.w << "\n"
              << "seed       " << report.seed << "\n"
              << "trials     " << report.trials << "\n"
              << "wins       " << report.wins << "  (rate " << report.win_rate() << ")\n"
              << "voids      " << report.voids << "\n"
              << "ledger     w=" << report.total_accepts << " l=" << report.total_mints
              << " v=" << report.total_verifies << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"semi-quantum money: classical bank, simulated quantum wallet"};
    app.require_subcommand(1);

    std::optional<int> opt_lambda, opt_n, opt_w;
    std::optional<uint64_t> opt_seed;
    app.add_option("--lambda", opt_lambda, "security parameter");
    app.add_option("--n", opt_n, "repetition override");
    app.add_option("--w", opt_w, "claw-function width override");
    app.add_option("--seed", opt_seed, "rng seed (reproducible runs)");

    // keygen
    auto* keygen = app.add_subcommand("keygen", "generate a bank key file");
    std::string out_path = "bank_key.json", pk_out;
    keygen->add_option("--out", out_path, "key file path");
    keygen->add_option("--pk-out", pk_out, "also write the public bundle");

    // serve
    auto* serve = app.add_subcommand("serve", "run the bank service");
    std::string serve_keyfile, host = "127.0.0.1", spent_db = "spent_serials.db";
    int port = 9321, timeout_ms = 30000;
    serve->add_option("--keyfile", serve_keyfile, "bank key file")->required();
    serve->add_option("--host", host, "listen address");
    serve->add_option("--port", port, "listen port (0 picks one)");
    serve->add_option("--spent-db", spent_db, "spent-serial database path");
    serve->add_option("--timeout-ms", timeout_ms, "per-connection receive timeout");

    // wallet commands
    std::string wallet_dir, note_id, connect, wallet_keyfile, pk_path, transfer_to;
    std::string scheme = "private";
    auto add_bank_opts = [&](CLI::App* cmd) {
        cmd->add_option("--wallet", wallet_dir, "wallet directory")->required();
        cmd->add_option("--connect", connect, "bank address host:port");
        cmd->add_option("--keyfile", wallet_keyfile, "run an in-process bank from this key file");
        cmd->add_option("--spent-db", spent_db, "spent-serial database (in-process bank)");
        cmd->add_option("--pk", pk_path, "public key bundle (public scheme against a live bank)");
    };
    auto* mint = app.add_subcommand("mint", "mint a banknote into the wallet");
    add_bank_opts(mint);
    mint->add_option("--scheme", scheme, "private|public");
    auto* verify = app.add_subcommand("verify", "verify (spend) a note with the bank");
    add_bank_opts(verify);
    verify->add_option("--note", note_id, "note id")->required();
    auto* list = app.add_subcommand("list", "list wallet notes");
    list->add_option("--wallet", wallet_dir, "wallet directory")->required();
    auto* transfer_cmd = app.add_subcommand("transfer", "move a public note to another wallet");
    transfer_cmd->add_option("--wallet", wallet_dir, "source wallet")->required();
    transfer_cmd->add_option("--note", note_id, "note id")->required();
    transfer_cmd->add_option("--to", transfer_to, "destination wallet directory")->required();

    // games / attack
    std::string game_name, strategy_name, scratch =
        (std::filesystem::temp_directory_path() / "semiqm_games").string();
    int trials = 1000, verify_cap = 64, mint_cap = 8;
    bool as_json = false, serial_exec = false;
    auto* games_cmd = app.add_subcommand("games", "run a security game");
    games_cmd->add_option("game", game_name, "solve2|counterfeit_2of2|counterfeit_mini|"
                                             "counterfeit_full|public_exclusivity")
        ->required();
    games_cmd->add_option("--strategy", strategy_name, "adversary strategy (default: first)");
    games_cmd->add_option("--trials", trials, "number of trials");
    games_cmd->add_option("--verify-cap", verify_cap, "verification cap per trial");
    games_cmd->add_option("--mint-cap", mint_cap, "mint cap per trial");
    games_cmd->add_option("--scratch", scratch, "scratch dir for public-scheme databases");
    games_cmd->add_flag("--json", as_json, "emit the report as JSON");
    games_cmd->add_flag("--serial", serial_exec, "force the serial trial loop");

    auto* attack = app.add_subcommand("attack", "run an attack strategy against a bank");
    attack->add_option("strategy", strategy_name, "replay|tamper|honest")->required();
    attack->add_option("--connect", connect, "attack a live bank at host:port");
    attack->add_option("--trials", trials, "number of trials");
    attack->add_flag("--json", as_json, "emit the report as JSON");

    // Global options (--seed, --n, --w, --lambda) may follow the subcommand.
    for (CLI::App* sub : {keygen, serve, mint, verify, list, transfer_cmd, games_cmd, attack}) {
        sub->fallthrough();
    }

    CLI11_PARSE(app, argc, argv);

    std::optional<int> lambda = resolve(opt_lambda, env_int("SEMIQM_LAMBDA"));
    std::optional<int> n = resolve(opt_n, env_int("SEMIQM_N"));
    std::optional<int> w = resolve(opt_w, env_int("SEMIQM_W"));
    uint64_t seed = pick_seed(opt_seed);

    try {
        if (keygen->parsed()) {
            Rng rng(seed);
            bank::BankKeyFile kf = bank::BankKeyFile::generate(lambda.value_or(256), n, w, rng);
            kf.save(out_path);
            if (!pk_out.empty()) {
                std::ofstream pk_file(pk_out, std::ios::trunc);
                pk_file << kf.public_bundle_dump();
            }
            std::cout << "wrote " << out_path << " (lambda=" << kf.lambda << ")\n";
            return kExitOk;
        }

        if (serve->parsed()) {
            bank::BankKeyFile kf = bank::BankKeyFile::load(serve_keyfile);
            bank::BankConfig cfg;
            cfg.lambda = lambda.value_or(kf.lambda);
            cfg.n = n ? n : kf.n;
            cfg.w = w ? w : kf.w;
            cfg.timeout_ms = timeout_ms;
            cfg.spent_db_path = spent_db;
            bank::Bank b(kf, cfg, seed);
            server::BankServer srv(b, host, port);
            std::cout << "bank listening on " << host << ":" << srv.port() << "\n" << std::flush;
            pause();  // run until signalled
            return kExitOk;
        }

        if (list->parsed()) {
            wallet::WalletStore store(wallet_dir);
            for (const auto& info : store.list()) {
                std::cout << info.id << "  " << info.scheme << "  " << info.status;
                if (info.scheme == "private") {
                    std::cout << "  n=" << info.n << " w=" << info.w << "  consumed "
                              << info.consumed_states << "/" << info.n;
                } else if (info.consumed_states > 0) {
                    std::cout << "  consumed";
                }
                std::cout << "\n";
            }
            return kExitOk;
        }

        if (transfer_cmd->parsed()) {
            wallet::WalletStore store(wallet_dir);
            wallet::transfer(store, note_id, transfer_to);
            std::cout << "transferred " << note_id << " to " << transfer_to << "\n";
            return kExitOk;
        }

        if (mint->parsed() || verify->parsed()) {
            BankEndpoint endpoint;
            endpoint.connect = connect;
            endpoint.keyfile = wallet_keyfile;
            endpoint.spent_db = spent_db;
            endpoint.open(seed, n, w, lambda);
            if (!pk_path.empty()) endpoint.pk = bank::load_public_bundle(pk_path);
            wallet::WalletStore store(wallet_dir);
            Rng rng(seed);

            if (mint->parsed()) {
                std::string id;
                if (scheme == "private") {
                    id = wallet::mint_private(store, *endpoint.transport, rng);
                } else if (scheme == "public") {
                    id = wallet::mint_public(store, *endpoint.transport, endpoint.pk, rng);
                } else {
                    std::cerr << "unknown scheme: " << scheme << "\n";
                    return kExitProtocol;
                }
                std::cout << "minted note " << id << "\n";
                return kExitOk;
            }

            wallet::VerifyOutcome outcome;
            if (store.scheme_of(note_id) == "public") {
                outcome = wallet::spend_public(store, *endpoint.transport, note_id, endpoint.pk,
                                               rng);
            } else {
                outcome = wallet::verify_private(store, *endpoint.transport, note_id, rng);
            }
            switch (outcome) {
                case wallet::VerifyOutcome::Accepted:
                    std::cout << "ACCEPTED\n";
                    return kExitOk;
                case wallet::VerifyOutcome::Rejected:
                    std::cout << "REJECTED\n";
                    return kExitRejected;
                case wallet::VerifyOutcome::Burned:
                    std::cout << "NOTE_BURNED\n";
                    return kExitRejected;
            }
        }

        if (games_cmd->parsed() || attack->parsed()) {
            games::GameParams params;
            params.lambda = lambda.value_or(256);
            params.n = n.value_or(8);
            params.w = w.value_or(16);
            params.trials = trials;
            params.seed = seed;
            params.verify_cap = verify_cap;
            params.mint_cap = mint_cap;
            params.parallel = !serial_exec;

            games::GameReport report;
            if (attack->parsed()) {
                if (!connect.empty()) {
                    auto colon = connect.rfind(':');
                    if (colon == std::string::npos) {
                        throw wire::ProtocolError("--connect wants host:port");
                    }
                    server::SocketTransport live = server::SocketTransport::connect(
                        connect.substr(0, colon), std::stoi(connect.substr(colon + 1)));
                    report = games::run_counterfeit_full(strategy_name, params, &live);
                } else {
                    report = games::run_counterfeit_full(strategy_name, params);
                }
            } else {
                if (strategy_name.empty()) strategy_name = games::strategies_for(game_name)[0];
                report = games::run_game(game_name, strategy_name, params, scratch);
            }
            print_report(report, as_json);
            return kExitOk;
        }
    } catch (const wallet::WalletError& e) {
        std::cerr << "storage error: " << e.what() << "\n";
        return kExitStorage;
    } catch (const lightning::StorageError& e) {
        std::cerr << "storage error: " << e.what() << "\n";
        return kExitStorage;
    } catch (const wire::ProtocolError& e) {
        std::cerr << "protocol error: " << e.what() << "\n";
        return kExitProtocol;
    } catch (const DecodeError& e) {
        std::cerr << "protocol error: " << e.what() << "\n";
        return kExitProtocol;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitProtocol;
    }
    return kExitOk;
}
