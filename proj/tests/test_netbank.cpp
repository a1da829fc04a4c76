#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <thread>

#include "semiqm/server.hpp"
#include "semiqm/wallet.hpp"

using namespace semiqm;
namespace fs = std::filesystem;

namespace {

std::string scratch_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / "semiqm_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir.string();
}

bank::BankKeyFile test_keyfile(uint64_t seed, std::optional<int> n = 16,
                               std::optional<int> w = 16) {
    Rng rng(seed);
    return bank::BankKeyFile::generate(256, n, w, rng);
}

}  // namespace

TEST_CASE("bank key file round-trips byte-identically") {
    bank::BankKeyFile kf = test_keyfile(101);
    std::string text = kf.dump();
    bank::BankKeyFile back = bank::BankKeyFile::parse(text);
    CHECK(back.dump() == text);

    std::string dir = scratch_dir("keyfile");
    kf.save(dir + "/bank_key.json");
    CHECK(bank::BankKeyFile::load(dir + "/bank_key.json").dump() == text);

    lightning::PublicKeyBundle pk = bank::parse_public_bundle(kf.public_bundle_dump());
    CHECK(pk.sig_pk == kf.sig.pk);
    CHECK(pk.suite.domain == kf.lightning_domain);

    CHECK_THROWS_AS(bank::BankKeyFile::parse("{}"), DecodeError);
}

TEST_CASE("in-process wallet lifecycle: mint, verify, re-verify") {
    bank::BankKeyFile kf = test_keyfile(102);
    bank::Bank b(kf, bank::BankConfig{}, 555);
    bank::LoopbackTransport t(b);
    wallet::WalletStore store(scratch_dir("wallet_basic"));
    Rng rng(7);

    std::string id = wallet::mint_private(store, t, rng);
    auto notes = store.list();
    REQUIRE(notes.size() == 1);
    CHECK(notes[0].id == id);
    CHECK(notes[0].status == "minted");
    CHECK(notes[0].consumed_states == 0);
    CHECK(notes[0].n == 16);

    CHECK(wallet::verify_private(store, t, id, rng) == wallet::VerifyOutcome::Accepted);
    notes = store.list();
    CHECK(notes[0].status == "spent");
    CHECK(notes[0].consumed_states == 16);

    // Re-verifying can only replay the recorded answers: a fresh challenge
    // rejects them except on a 2^-16 collision.
    CHECK(wallet::verify_private(store, t, id, rng) == wallet::VerifyOutcome::Rejected);

    CHECK_THROWS_AS(wallet::verify_private(store, t, "deadbeef", rng), wallet::WalletError);
    CHECK(b.active_sessions() == 0);
}

TEST_CASE("wallet store enforces note invariants and the advisory lock") {
    bank::BankKeyFile kf = test_keyfile(103);
    bank::Bank b(kf, bank::BankConfig{}, 556);
    bank::LoopbackTransport t(b);
    std::string dir = scratch_dir("wallet_invariants");
    Rng rng(8);
    std::string id;
    {
        wallet::WalletStore store(dir);
        id = wallet::mint_private(store, t, rng);
        CHECK_THROWS_AS([&] { wallet::WalletStore second(dir); }(), wallet::WalletError);  // locked
    }
    wallet::WalletStore store(dir);
    CHECK_NOTHROW(store.load_private(id));

    // Corrupt one state branch: the claw no longer matches its obligation.
    {
        std::ifstream in(store.note_path(id));
        wire::json j = wire::json::parse(in);
        std::string x0 = j["states"][0]["x0"];
        std::string flipped = x0;
        flipped[0] = flipped[0] == '0' ? '1' : '0';
        j["states"][0]["x0"] = flipped;
        std::ofstream out(store.note_path(id), std::ios::trunc);
        out << j.dump(2) << "\n";
    }
    CHECK_THROWS_AS(store.load_private(id), wallet::WalletError);
}

TEST_CASE("wallet surfaces NOTE_BURNED on a d = 0 measurement") {
    bank::BankKeyFile kf = test_keyfile(104, 4, 2);  // w = 2: burns are frequent
    bool burned_seen = false;
    for (uint64_t seed = 0; seed < 64 && !burned_seen; ++seed) {
        bank::Bank b(kf, bank::BankConfig{}, 900 + seed);
        bank::LoopbackTransport t(b);
        wallet::WalletStore store(scratch_dir("wallet_burn"));
        Rng rng(seed);
        std::string id = wallet::mint_private(store, t, rng);
        wallet::VerifyOutcome outcome = wallet::verify_private(store, t, id, rng);
        if (outcome == wallet::VerifyOutcome::Burned) {
            burned_seen = true;
            CHECK(store.list()[0].status == "burned");
        }
    }
    CHECK(burned_seen);
}

TEST_CASE("public notes: mint, qverify, spend, transfer") {
    bank::BankKeyFile kf = test_keyfile(105);
    bank::BankConfig cfg;
    std::string db_dir = scratch_dir("public_db");
    cfg.spent_db_path = db_dir + "/spent.db";
    bank::Bank b(kf, cfg, 557);
    bank::LoopbackTransport t(b);
    lightning::PublicKeyBundle pk = kf.public_bundle();
    wallet::WalletStore store(scratch_dir("wallet_public"));
    Rng rng(9);

    std::string id = wallet::mint_public(store, t, pk, rng);
    CHECK(wallet::qverify_public(store, pk, id));
    CHECK(wallet::qverify_public(store, pk, id));

    // Transfer is the simulated quantum channel; the receiver can qverify.
    std::string dest = scratch_dir("wallet_public_dest");
    wallet::transfer(store, id, dest);
    CHECK(store.list().empty());
    wallet::WalletStore store2(dest);
    auto notes = store2.list();
    REQUIRE(notes.size() == 1);
    std::string id2 = notes[0].id;
    CHECK(wallet::qverify_public(store2, pk, id2));

    CHECK(wallet::spend_public(store2, t, id2, pk, rng) == wallet::VerifyOutcome::Accepted);
    CHECK(!wallet::qverify_public(store2, pk, id2));  // bolt consumed
    CHECK(wallet::spend_public(store2, t, id2, pk, rng) == wallet::VerifyOutcome::Burned);
}

TEST_CASE("seeded sessions produce byte-identical transcripts, free of secrets") {
    auto run_once = [&](std::vector<std::string>& transcript) {
        bank::BankKeyFile kf = test_keyfile(106);
        bank::Bank b(kf, bank::BankConfig{}, 558);
        bank::LoopbackTransport t(b, &transcript);
        wallet::WalletStore store(scratch_dir("wallet_golden_" +
                                              std::to_string(transcript.size())));
        Rng rng(10);
        std::string id = wallet::mint_private(store, t, rng);
        wallet::verify_private(store, t, id, rng);
        return kf;
    };
    std::vector<std::string> t1, t2;
    bank::BankKeyFile kf = run_once(t1);
    run_once(t2);
    REQUIRE(!t1.empty());
    CHECK(t1 == t2);

    // The bank must never emit key material or a decryptable mini key.
    std::string joined;
    for (const std::string& line : t1) joined += line;
    CHECK(joined.find(to_hex(kf.full_key.mac_key.bytes)) == std::string::npos);
    CHECK(joined.find(to_hex(kf.full_key.enc_key.bytes)) == std::string::npos);
    CHECK(joined.find(to_hex(kf.sig.sk_seed)) == std::string::npos);

    // Recover the minted mini key from the wire ciphertext with the bank's
    // key; its plaintext encoding and its trapdoors must be absent.
    std::optional<money::MiniKey> minted;
    for (const std::string& line : t1) {
        wire::WireMessage m = wire::decode(line);
        if (m.type != wire::MsgType::TagNote) continue;
        wire::TagNoteBody body = wire::tag_note_body(m.body);
        Bytes plain = primitives::decrypt(kf.full_key.enc_key, body.wrapped_key);
        minted = money::decode_mini_key(plain);
        CHECK(joined.find(to_hex(plain)) == std::string::npos);
    }
    REQUIRE(minted.has_value());
    for (const auto& vk : minted->verkeys) {
        Bytes trapdoor_bytes = vk.trapdoor.shift.pack();
        trapdoor_bytes.insert(trapdoor_bytes.end(), vk.trapdoor.perm_key.begin(),
                              vk.trapdoor.perm_key.end());
        CHECK(joined.find(to_hex(trapdoor_bytes)) == std::string::npos);
    }
}

TEST_CASE("the private-scheme bank is memoryless across sessions") {
    bank::BankKeyFile kf = test_keyfile(107, 8, 16);
    bank::Bank b(kf, bank::BankConfig{}, 559);
    std::string before = b.private_state_snapshot();

    wallet::WalletStore store(scratch_dir("wallet_stateless"));
    Rng rng(11);
    for (int round = 0; round < 100; ++round) {
        bank::LoopbackTransport t(b);
        switch (round % 4) {
            case 0:
                wallet::mint_private(store, t, rng);
                break;
            case 1: {
                std::string id = wallet::mint_private(store, t, rng);
                wallet::verify_private(store, t, id, rng);
                break;
            }
            case 2: {
                // Abandon a mint session mid-protocol.
                std::string session = wire::fresh_session_id(rng);
                t.send({session, 0, wire::MsgType::MintInit, wire::json::object()});
                b.drop_session(session);
                break;
            }
            case 3: {
                // Malformed traffic gets an ERROR and leaves nothing behind.
                std::string session = wire::fresh_session_id(rng);
                t.send({session, 0, wire::MsgType::Obligations, wire::json::object()});
                wire::WireMessage reply = t.recv();
                CHECK(reply.type == wire::MsgType::Error);
                break;
            }
        }
    }
    CHECK(b.active_sessions() == 0);
    CHECK(b.private_state_snapshot() == before);
}

TEST_CASE("socket server: concurrent clients, drops, and durability") {
    bank::BankKeyFile kf = test_keyfile(108, 8, 16);
    bank::BankConfig cfg;
    cfg.timeout_ms = 5000;
    std::string db_dir = scratch_dir("socket_db");
    cfg.spent_db_path = db_dir + "/spent.db";

    std::string spend_replay_line;
    {
        bank::Bank b(kf, cfg, 560);
        server::BankServer srv(b, "127.0.0.1", 0);

        // Eight concurrent clients, each one full mint + verify.
        std::vector<std::thread> clients;
        std::array<wallet::VerifyOutcome, 8> outcomes{};
        for (int c = 0; c < 8; ++c) {
            clients.emplace_back([&, c] {
                server::SocketTransport t =
                    server::SocketTransport::connect("127.0.0.1", srv.port());
                wallet::WalletStore store(scratch_dir("socket_wallet_" + std::to_string(c)));
                Rng rng(1000 + c);
                std::string id = wallet::mint_private(store, t, rng);
                outcomes[c] = wallet::verify_private(store, t, id, rng);
            });
        }
        for (auto& th : clients) th.join();
        for (auto outcome : outcomes) CHECK(outcome == wallet::VerifyOutcome::Accepted);

        // A dropped connection abandons its session on the bank.
        {
            server::SocketTransport t = server::SocketTransport::connect("127.0.0.1", srv.port());
            Rng rng(2000);
            std::string session = wire::fresh_session_id(rng);
            t.send({session, 0, wire::MsgType::MintInit, wire::json::object()});
            t.recv();
        }
        for (int i = 0; i < 100 && b.active_sessions() != 0; ++i) {
            std::this_thread::sleep_for(std::chrono::milliseconds(10));
        }
        CHECK(b.active_sessions() == 0);

        // Public spend over the socket.
        server::SocketTransport t = server::SocketTransport::connect("127.0.0.1", srv.port());
        lightning::PublicKeyBundle pk = kf.public_bundle();
        Rng rng(3000);
        lightning::PublicBanknote note;
        note.bolt = lightning::gen_bolt(pk.suite, rng);
        note.serial = note.bolt.serial;
        std::string session = wire::fresh_session_id(rng);
        t.send({session, 0, wire::MsgType::PMintSerial,
                wire::to_json(wire::PMintSerialBody{note.serial})});
        note.signature = wire::p_signature_body(t.recv().body).signature;
        wire::PSpendBody spend = lightning::p_cverify_user(pk, note);
        t.send({wire::fresh_session_id(rng), 0, wire::MsgType::PSpend, wire::to_json(spend)});
        CHECK(wire::result_body(t.recv().body).accepted);
        spend_replay_line = wire::encode(
            {wire::fresh_session_id(rng), 0, wire::MsgType::PSpend, wire::to_json(spend)});
        srv.stop();
    }

    // Bank restart: the spent serial survives, the replay is rejected.
    bank::Bank b2(kf, cfg, 561);
    bank::LoopbackTransport t2(b2);
    t2.send(wire::decode(spend_replay_line));
    CHECK(!wire::result_body(t2.recv().body).accepted);
}
