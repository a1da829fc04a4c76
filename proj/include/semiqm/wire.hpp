#pragma once

#include <json.hpp>
#include <string>

#include "semiqm/ntcf.hpp"
#include "semiqm/primitives.hpp"
#include "semiqm/puzzles.hpp"

// Wire protocol: one JSON object per line, UTF-8, lowercase hex for binary
// fields. BitVec fields pack big-endian with bit 0 as the most significant bit
// of byte 0; widths not divisible by 8 are zero-padded in the low bits of the
// final byte. nlohmann::json keeps object keys sorted, so encoding is
// deterministic and seeded sessions produce byte-identical transcripts.
namespace semiqm::wire {

using json = nlohmann::json;

// Out-of-order or malformed protocol traffic. Sessions that throw this are
// aborted; over the wire it surfaces as an ERROR message.
struct ProtocolError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class MsgType {
    MintInit,
    Puzzles,
    Obligations,
    TagNote,
    VerifyInit,
    Challenge,
    Answers,
    Result,
    PMintSerial,
    PSignature,
    PSpend,
    Error,
};

const char* type_name(MsgType t);
MsgType type_from_name(const std::string& name);  // throws DecodeError

struct WireMessage {
    std::string session;  // 16 hex chars
    uint64_t seq = 0;     // strictly increasing within a session
    MsgType type = MsgType::Error;
    json body;

    bool operator==(const WireMessage&) const = default;
};

std::string encode(const WireMessage& m);          // single line ending in '\n'
WireMessage decode(const std::string& line);       // throws DecodeError

// Bit strings of arbitrary length (challenge vectors) use the same packing
// rule as BitVec.
Bytes pack_bits(const std::vector<uint8_t>& bits);
std::vector<uint8_t> unpack_bits(std::span<const uint8_t> bytes, int nbits);

// ---- typed bodies ----

struct PuzzlesBody {
    int n = 0;
    int w = 0;
    std::vector<ntcf::FunctionKey> keys;
};

struct ObligationsBody {
    int w = 0;
    puzzles::ObligationVector obligations;
};

struct TagNoteBody {
    primitives::Tag tag;                  // over the canonical obligation encoding
    primitives::Ciphertext wrapped_key;   // ENC of the per-note mini key
    primitives::Tag wrapped_tag;          // MAC over the ciphertext
};

struct VerifyInitBody {
    primitives::Ciphertext wrapped_key;
    primitives::Tag wrapped_tag;
};

struct ChallengeBody {
    puzzles::ChallengeVector bits;
};

struct AnswersBody {
    puzzles::AnswerVector answers;
    int w = 0;
    puzzles::ObligationVector obligations;
    primitives::Tag tag;
};

struct ResultBody {
    bool accepted = false;
    std::string code;  // "OK", "REJECTED", ...
};

struct PMintSerialBody {
    std::array<uint8_t, 32> serial{};
};

struct PSignatureBody {
    Bytes signature;
};

struct PSpendBody {
    std::array<uint8_t, 32> serial{};
    Bytes signature;
    std::array<uint8_t, 32> certificate{};
};

struct ErrorBody {
    std::string message;
};

json to_json(const PuzzlesBody&);
json to_json(const ObligationsBody&);
json to_json(const TagNoteBody&);
json to_json(const VerifyInitBody&);
json to_json(const ChallengeBody&);
json to_json(const AnswersBody&);
json to_json(const ResultBody&);
json to_json(const PMintSerialBody&);
json to_json(const PSignatureBody&);
json to_json(const PSpendBody&);
json to_json(const ErrorBody&);

// Each parser throws DecodeError on missing fields, bad hex, or out-of-range
// widths. Values that parse but violate protocol expectations are judged by
// the session layer.
PuzzlesBody puzzles_body(const json&);
ObligationsBody obligations_body(const json&);
TagNoteBody tag_note_body(const json&);
VerifyInitBody verify_init_body(const json&);
ChallengeBody challenge_body(const json&);
AnswersBody answers_body(const json&);
ResultBody result_body(const json&);
PMintSerialBody p_mint_serial_body(const json&);
PSignatureBody p_signature_body(const json&);
PSpendBody p_spend_body(const json&);
ErrorBody error_body(const json&);

std::string fresh_session_id(Rng& rng);

// Message stream to a bank. Implementations: in-process loopback and TCP
// socket, with identical semantics.
class Transport {
public:
    virtual ~Transport() = default;
    virtual void send(const WireMessage& msg) = 0;
    // Next reply in order. Throws ProtocolError when the peer is gone or the
    // stream is corrupt.
    virtual WireMessage recv() = 0;
};

}  // namespace semiqm::wire
