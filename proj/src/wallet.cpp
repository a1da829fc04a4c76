#include "semiqm/wallet.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <sys/stat.h>
#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace semiqm::wallet {

namespace fs = std::filesystem;
using wire::json;

WalletStore::WalletStore(const std::string& dir) : dir_(dir) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw WalletError("cannot create wallet directory: " + dir_);
    std::string lock_path = dir_ + "/.lock";
    lock_fd_ = ::open(lock_path.c_str(), O_WRONLY | O_CREAT, 0644);
    if (lock_fd_ < 0) throw WalletError("cannot open wallet lock file");
    if (::flock(lock_fd_, LOCK_EX | LOCK_NB) != 0) {
        ::close(lock_fd_);
        lock_fd_ = -1;
        throw WalletError("wallet is locked by another process");
    }
}

WalletStore::~WalletStore() {
    if (lock_fd_ >= 0) ::close(lock_fd_);
}

std::string WalletStore::note_path(const std::string& id) const {
    return dir_ + "/" + id + ".json";
}

static json read_note(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw WalletError("note not found: " + path);
    std::ostringstream text;
    text << in.rdbuf();
    json j = json::parse(text.str(), nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded() || !j.is_object()) throw WalletError("corrupt note file: " + path);
    if (!j.contains("simulated") || j["simulated"] != true) {
        throw WalletError("note file missing simulated marker: " + path);
    }
    return j;
}

static void write_note(const std::string& path, const json& j) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw WalletError("cannot write note file: " + path);
    out << j.dump(2) << "\n";
    if (!out) throw WalletError("short write on note file: " + path);
}

static std::string fresh_id(Rng& rng) {
    return to_hex(rng.bytes<4>());
}

static json private_note_json(const money::FullBanknote& note,
                              const puzzles::PuzzleVector& puzzles, const std::string& status) {
    json states = json::array();
    for (const auto& s : note.note.states) {
        states.push_back(json{{"x0", s.branch0().hex()},
                              {"x1", s.branch1().hex()},
                              {"consumed", s.consumed()}});
    }
    json obls = json::array();
    for (const auto& o : note.note.obligations) obls.push_back(o.image.y.hex());
    json keys = json::array();
    for (const auto& p : puzzles) keys.push_back(to_hex(p.key.perm_key));
    return json{{"version", 1},
                {"simulated", true},
                {"scheme", "private"},
                {"status", status},
                {"n", note.note.n},
                {"w", note.note.w},
                {"wrapped_key", to_hex(note.wrapped_key.serialize())},
                {"wrapped_tag", to_hex(note.wrapped_tag.bytes)},
                {"tag", to_hex(note.note.tag.bytes)},
                {"obligations", obls},
                {"keys", keys},
                {"states", states}};
}

std::string WalletStore::save_private(const money::FullBanknote& note,
                                      const puzzles::PuzzleVector& puzzles, Rng& rng) {
    std::string id = fresh_id(rng);
    write_note(note_path(id), private_note_json(note, puzzles, "minted"));
    return id;
}

money::FullBanknote WalletStore::load_private(const std::string& id,
                                              puzzles::PuzzleVector* puzzles) {
    json j = read_note(note_path(id));
    if (j.value("scheme", "") != "private") throw WalletError("note is not a private note");
    money::FullBanknote note;
    note.note.n = j.at("n").get<int>();
    note.note.w = j.at("w").get<int>();
    note.wrapped_key = primitives::Ciphertext::parse(from_hex(j.at("wrapped_key")));
    note.wrapped_tag.bytes = array_from_hex<32>(j.at("wrapped_tag"));
    note.note.tag.bytes = array_from_hex<32>(j.at("tag"));
    for (const auto& o : j.at("obligations")) {
        note.note.obligations.push_back(
            puzzles::Obligation{ntcf::Image{qsim::BitVec::from_hex(o, note.note.w)}});
    }
    puzzles::PuzzleVector keys;
    for (const auto& k : j.at("keys")) {
        ntcf::FunctionKey fk;
        fk.width = note.note.w;
        fk.perm_key = array_from_hex<32>(k.get<std::string>());
        keys.push_back(puzzles::Puzzle{fk});
    }
    for (const auto& s : j.at("states")) {
        note.note.states.push_back(
            qsim::ClawState::restore(qsim::BitVec::from_hex(s.at("x0"), note.note.w),
                                     qsim::BitVec::from_hex(s.at("x1"), note.note.w),
                                     s.at("consumed").get<bool>()));
    }
    if (static_cast<int>(note.note.states.size()) != note.note.n ||
        static_cast<int>(note.note.obligations.size()) != note.note.n ||
        static_cast<int>(keys.size()) != note.note.n) {
        throw WalletError("note invariants violated: arity");
    }
    for (int i = 0; i < note.note.n; ++i) {
        const auto& s = note.note.states[i];
        if (s.consumed()) continue;
        if (!ntcf::check(keys[i].key, 0, s.branch0(), note.note.obligations[i].image) ||
            !ntcf::check(keys[i].key, 1, s.branch1(), note.note.obligations[i].image)) {
            throw WalletError("note invariants violated: state is not a claw of its obligation");
        }
    }
    if (puzzles) *puzzles = std::move(keys);
    return note;
}

void WalletStore::update_private(const std::string& id, const money::FullBanknote& note,
                                 const std::string& status,
                                 const money::VerifyTranscript* transcript) {
    json old = read_note(note_path(id));
    puzzles::PuzzleVector keys;
    for (const auto& k : old.at("keys")) {
        ntcf::FunctionKey fk;
        fk.width = note.note.w;
        fk.perm_key = array_from_hex<32>(k.get<std::string>());
        keys.push_back(puzzles::Puzzle{fk});
    }
    json j = private_note_json(note, keys, status);
    if (transcript) {
        json answers = json::array();
        for (const auto& a : transcript->answers) {
            answers.push_back(
                json{{"i", a.i},
                     {"kind", a.kind == puzzles::AnswerKind::Preimage ? "preimage" : "equation"},
                     {"payload", a.payload.hex()},
                     {"w", a.payload.width()}});
        }
        j["last_answers"] = answers;
    } else if (old.contains("last_answers")) {
        j["last_answers"] = old["last_answers"];
    }
    write_note(note_path(id), j);
}

std::optional<puzzles::AnswerVector> WalletStore::stored_answers(const std::string& id) {
    json j = read_note(note_path(id));
    if (!j.contains("last_answers")) return std::nullopt;
    puzzles::AnswerVector out;
    for (const auto& a : j["last_answers"]) {
        puzzles::Answer ans;
        ans.i = a.at("i").get<int>();
        ans.kind = a.at("kind") == "preimage" ? puzzles::AnswerKind::Preimage
                                              : puzzles::AnswerKind::Equation;
        ans.payload = qsim::BitVec::from_hex(a.at("payload"), a.at("w").get<int>());
        out.push_back(ans);
    }
    return out;
}

static json public_note_json(const lightning::PublicBanknote& note, const std::string& status) {
    return json{{"version", 1},
                {"simulated", true},
                {"scheme", "public"},
                {"status", status},
                {"serial", to_hex(note.serial)},
                {"signature", to_hex(note.signature)},
                {"secret", to_hex(note.bolt.secret)},
                {"consumed", note.bolt.consumed}};
}

std::string WalletStore::save_public(const lightning::PublicBanknote& note, Rng& rng) {
    std::string id = fresh_id(rng);
    write_note(note_path(id), public_note_json(note, "minted"));
    return id;
}

lightning::PublicBanknote WalletStore::load_public(const std::string& id) {
    json j = read_note(note_path(id));
    if (j.value("scheme", "") != "public") throw WalletError("note is not a public note");
    lightning::PublicBanknote note;
    note.serial = array_from_hex<32>(j.at("serial"));
    note.signature = from_hex(j.at("signature"));
    note.bolt.secret = array_from_hex<32>(j.at("secret"));
    note.bolt.serial = note.serial;
    note.bolt.consumed = j.at("consumed").get<bool>();
    return note;
}

void WalletStore::update_public(const std::string& id, const lightning::PublicBanknote& note,
                                const std::string& status) {
    write_note(note_path(id), public_note_json(note, status));
}

std::string WalletStore::scheme_of(const std::string& id) {
    return read_note(note_path(id)).value("scheme", "");
}

std::vector<NoteInfo> WalletStore::list() const {
    std::vector<NoteInfo> out;
    for (const auto& entry : fs::directory_iterator(dir_)) {
        if (entry.path().extension() != ".json") continue;
        json j = read_note(entry.path().string());
        NoteInfo info;
        info.id = entry.path().stem().string();
        info.scheme = j.value("scheme", "?");
        info.status = j.value("status", "?");
        info.n = j.value("n", 0);
        info.w = j.value("w", 0);
        if (j.contains("states")) {
            for (const auto& s : j["states"]) {
                if (s.value("consumed", false)) ++info.consumed_states;
            }
        } else if (j.value("consumed", false)) {
            info.consumed_states = 1;
        }
        out.push_back(std::move(info));
    }
    std::sort(out.begin(), out.end(),
              [](const NoteInfo& a, const NoteInfo& b) { return a.id < b.id; });
    return out;
}

void WalletStore::remove(const std::string& id) {
    std::error_code ec;
    if (!fs::remove(note_path(id), ec) || ec) throw WalletError("cannot remove note: " + id);
}

// ---- protocol drivers ----

static wire::WireMessage expect(wire::Transport& t, wire::MsgType type) {
    wire::WireMessage m = t.recv();
    if (m.type == wire::MsgType::Error) {
        throw wire::ProtocolError("bank error: " + wire::error_body(m.body).message);
    }
    if (m.type != type) throw wire::ProtocolError("unexpected reply type");
    return m;
}

std::string mint_private(WalletStore& store, wire::Transport& t, Rng& rng) {
    std::string session = wire::fresh_session_id(rng);
    t.send({session, 0, wire::MsgType::MintInit, json::object()});
    wire::PuzzlesBody puzzles = wire::puzzles_body(expect(t, wire::MsgType::Puzzles).body);

    money::FullMintUser user;
    wire::ObligationsBody obligations = user.on_puzzles(puzzles, rng);
    t.send({session, 2, wire::MsgType::Obligations, wire::to_json(obligations)});
    wire::TagNoteBody tag_note = wire::tag_note_body(expect(t, wire::MsgType::TagNote).body);

    money::FullBanknote note = user.on_tag_note(tag_note);
    puzzles::PuzzleVector keys;
    for (const auto& k : puzzles.keys) keys.push_back(puzzles::Puzzle{k});
    return store.save_private(note, keys, rng);
}

VerifyOutcome verify_private(WalletStore& store, wire::Transport& t, const std::string& id,
                             Rng& rng) {
    money::FullBanknote note = store.load_private(id);

    bool all_consumed = !note.note.states.empty();
    for (const auto& s : note.note.states) {
        if (!s.consumed()) all_consumed = false;
    }
    if (all_consumed) {
        // Nothing left to measure. All the wallet can do is replay the answers
        // it sent before, which a fresh challenge rejects with overwhelming
        // probability.
        std::optional<puzzles::AnswerVector> replayed = store.stored_answers(id);
        if (!replayed) throw WalletError("note already measured and no transcript stored");
        std::string session = wire::fresh_session_id(rng);
        t.send({session, 0, wire::MsgType::VerifyInit,
                wire::to_json(wire::VerifyInitBody{note.wrapped_key, note.wrapped_tag})});
        wire::WireMessage first = t.recv();
        if (first.type == wire::MsgType::Result) {
            return wire::result_body(first.body).accepted ? VerifyOutcome::Accepted
                                                          : VerifyOutcome::Rejected;
        }
        if (first.type != wire::MsgType::Challenge) {
            throw wire::ProtocolError("unexpected reply type");
        }
        wire::AnswersBody answers;
        answers.w = note.note.w;
        answers.obligations = note.note.obligations;
        answers.tag = note.note.tag;
        answers.answers = *replayed;
        t.send({session, 2, wire::MsgType::Answers, wire::to_json(answers)});
        bool accepted = wire::result_body(expect(t, wire::MsgType::Result).body).accepted;
        return accepted ? VerifyOutcome::Accepted : VerifyOutcome::Rejected;
    }

    money::FullVerifyUser user(note);
    std::string session = wire::fresh_session_id(rng);
    t.send({session, 0, wire::MsgType::VerifyInit, wire::to_json(user.init())});
    wire::WireMessage first = t.recv();
    if (first.type == wire::MsgType::Error) {
        throw wire::ProtocolError("bank error: " + wire::error_body(first.body).message);
    }
    if (first.type == wire::MsgType::Result) {
        bool accepted = wire::result_body(first.body).accepted;
        store.update_private(id, note, accepted ? "spent" : "rejected");
        return accepted ? VerifyOutcome::Accepted : VerifyOutcome::Rejected;
    }
    if (first.type != wire::MsgType::Challenge) {
        throw wire::ProtocolError("unexpected reply type");
    }

    wire::AnswersBody answers = user.on_challenge(wire::challenge_body(first.body), rng);
    // The measurement just consumed the states; persist that (and the answers)
    // before the outcome is known, mirroring irreversibility.
    store.update_private(id, note, user.burned() ? "burned" : "pending", &user.transcript());
    t.send({session, 2, wire::MsgType::Answers, wire::to_json(answers)});
    bool accepted = wire::result_body(expect(t, wire::MsgType::Result).body).accepted;
    user.on_result(accepted);

    if (accepted) {
        store.update_private(id, note, "spent", &user.transcript());
        return VerifyOutcome::Accepted;
    }
    if (user.burned()) {
        store.update_private(id, note, "burned", &user.transcript());
        return VerifyOutcome::Burned;
    }
    store.update_private(id, note, "rejected", &user.transcript());
    return VerifyOutcome::Rejected;
}

std::string mint_public(WalletStore& store, wire::Transport& t,
                        const lightning::PublicKeyBundle& pk, Rng& rng) {
    lightning::PublicBanknote note;
    note.bolt = lightning::gen_bolt(pk.suite, rng);
    note.serial = note.bolt.serial;

    std::string session = wire::fresh_session_id(rng);
    t.send({session, 0, wire::MsgType::PMintSerial,
            wire::to_json(wire::PMintSerialBody{note.serial})});
    note.signature = wire::p_signature_body(expect(t, wire::MsgType::PSignature).body).signature;
    return store.save_public(note, rng);
}

VerifyOutcome spend_public(WalletStore& store, wire::Transport& t, const std::string& id,
                           const lightning::PublicKeyBundle& pk, Rng& rng) {
    lightning::PublicBanknote note = store.load_public(id);
    if (note.bolt.consumed) return VerifyOutcome::Burned;
    wire::PSpendBody body = lightning::p_cverify_user(pk, note);
    store.update_public(id, note, "pending");

    std::string session = wire::fresh_session_id(rng);
    t.send({session, 0, wire::MsgType::PSpend, wire::to_json(body)});
    bool accepted = wire::result_body(expect(t, wire::MsgType::Result).body).accepted;
    store.update_public(id, note, accepted ? "spent" : "rejected");
    return accepted ? VerifyOutcome::Accepted : VerifyOutcome::Rejected;
}

bool qverify_public(WalletStore& store, const lightning::PublicKeyBundle& pk,
                    const std::string& id) {
    lightning::PublicBanknote note = store.load_public(id);
    return lightning::p_qverify(pk, note);
}

void transfer(WalletStore& from, const std::string& id, const std::string& dest_dir) {
    if (from.scheme_of(id) != "public") {
        throw WalletError("only public notes can be transferred between wallets");
    }
    lightning::PublicBanknote note = from.load_public(id);
    WalletStore dest(dest_dir);
    // Serials are unique, so their prefix makes a stable note id at the
    // receiver.
    std::string dest_id = to_hex(note.serial).substr(0, 8);
    write_note(dest.note_path(dest_id), public_note_json(note, "minted"));
    from.remove(id);
}

}  // namespace semiqm::wallet
