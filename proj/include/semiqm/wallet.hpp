#pragma once

#include <string>
#include <vector>

#include "semiqm/lightning.hpp"
#include "semiqm/money_user.hpp"

namespace semiqm::wallet {

struct WalletError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class VerifyOutcome { Accepted, Rejected, Burned };

struct NoteInfo {
    std::string id;
    std::string scheme;  // "private" or "public"
    std::string status;  // minted / spent / burned / rejected / transferred
    int n = 0;
    int w = 0;
    int consumed_states = 0;
};

// Directory of note files, one JSON document per note. Notes carry the
// serialized simulated states with a mandatory top-level simulated=true
// marker (a real quantum state could not be written to disk) and per-state
// consumed flags, which persist across loads. Single-process access is
// guarded by an advisory lock on the directory.
class WalletStore {
public:
    explicit WalletStore(const std::string& dir);
    ~WalletStore();
    WalletStore(const WalletStore&) = delete;
    WalletStore& operator=(const WalletStore&) = delete;

    const std::string& dir() const { return dir_; }

    std::string save_private(const money::FullBanknote& note,
                             const puzzles::PuzzleVector& puzzles, Rng& rng);
    // Loading revalidates the note invariants: state count and widths, and
    // each unconsumed state's branches being preimages of its obligation.
    money::FullBanknote load_private(const std::string& id, puzzles::PuzzleVector* puzzles =
                                                                nullptr);
    // A transcript, when given, persists the sent answers: verifying an
    // already-measured note can then only replay them.
    void update_private(const std::string& id, const money::FullBanknote& note,
                        const std::string& status,
                        const money::VerifyTranscript* transcript = nullptr);
    std::optional<puzzles::AnswerVector> stored_answers(const std::string& id);

    std::string save_public(const lightning::PublicBanknote& note, Rng& rng);
    lightning::PublicBanknote load_public(const std::string& id);
    void update_public(const std::string& id, const lightning::PublicBanknote& note,
                       const std::string& status);

    std::string scheme_of(const std::string& id);
    std::vector<NoteInfo> list() const;
    std::string note_path(const std::string& id) const;
    void remove(const std::string& id);

private:
    std::string dir_;
    int lock_fd_ = -1;
};

// Three-message mint over the wire; stores the note and returns its id.
std::string mint_private(WalletStore& store, wire::Transport& t, Rng& rng);

// One-round verification. The states are consumed (and persisted as consumed)
// before the bank's decision is known; Burned means the wallet itself measured
// an unverifiable answer (d = 0) and no recovery exists.
VerifyOutcome verify_private(WalletStore& store, wire::Transport& t, const std::string& id,
                             Rng& rng);

std::string mint_public(WalletStore& store, wire::Transport& t,
                        const lightning::PublicKeyBundle& pk, Rng& rng);
VerifyOutcome spend_public(WalletStore& store, wire::Transport& t, const std::string& id,
                           const lightning::PublicKeyBundle& pk, Rng& rng);
bool qverify_public(WalletStore& store, const lightning::PublicKeyBundle& pk,
                    const std::string& id);

// Simulated quantum channel: moves a public note file into another wallet.
void transfer(WalletStore& from, const std::string& id, const std::string& dest_dir);

}  // namespace semiqm::wallet
