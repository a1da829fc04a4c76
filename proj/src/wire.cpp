#include "semiqm/wire.hpp"

namespace semiqm::wire {

namespace {

const std::pair<MsgType, const char*> kTypeNames[] = {
    {MsgType::MintInit, "MINT_INIT"},       {MsgType::Puzzles, "PUZZLES"},
    {MsgType::Obligations, "OBLIGATIONS"},  {MsgType::TagNote, "TAG_NOTE"},
    {MsgType::VerifyInit, "VERIFY_INIT"},   {MsgType::Challenge, "CHALLENGE"},
    {MsgType::Answers, "ANSWERS"},          {MsgType::Result, "RESULT"},
    {MsgType::PMintSerial, "P_MINT_SERIAL"},{MsgType::PSignature, "P_SIGNATURE"},
    {MsgType::PSpend, "P_SPEND"},           {MsgType::Error, "ERROR"},
};

const json& require(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw DecodeError(std::string("missing field: ") + key);
    return *it;
}

std::string require_string(const json& j, const char* key) {
    const json& v = require(j, key);
    if (!v.is_string()) throw DecodeError(std::string("field is not a string: ") + key);
    return v.get<std::string>();
}

int require_int(const json& j, const char* key, int lo, int hi) {
    const json& v = require(j, key);
    if (!v.is_number_integer()) throw DecodeError(std::string("field is not an integer: ") + key);
    int64_t n = v.get<int64_t>();
    if (n < lo || n > hi) throw DecodeError(std::string("field out of range: ") + key);
    return static_cast<int>(n);
}

template <size_t N>
std::array<uint8_t, N> require_fixed_hex(const json& j, const char* key) {
    return array_from_hex<N>(require_string(j, key));
}

}  // namespace

const char* type_name(MsgType t) {
    for (auto& [mt, name] : kTypeNames) {
        if (mt == t) return name;
    }
    return "ERROR";
}

MsgType type_from_name(const std::string& name) {
    for (auto& [mt, n] : kTypeNames) {
        if (name == n) return mt;
    }
    throw DecodeError("unknown message type: " + name);
}

std::string encode(const WireMessage& m) {
    json j;
    j["body"] = m.body;
    j["seq"] = m.seq;
    j["session"] = m.session;
    j["type"] = type_name(m.type);
    return j.dump() + "\n";
}

WireMessage decode(const std::string& line) {
    json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded() || !j.is_object()) throw DecodeError("malformed message line");
    for (auto it = j.begin(); it != j.end(); ++it) {
        std::string k = it.key();
        if (k != "body" && k != "seq" && k != "session" && k != "type") {
            throw DecodeError("unknown envelope field: " + k);
        }
    }
    WireMessage m;
    m.session = require_string(j, "session");
    if (m.session.size() != 16) throw DecodeError("session id must be 16 hex chars");
    from_hex(m.session);  // validates hex digits
    const json& seq = require(j, "seq");
    if (!seq.is_number_unsigned() && !seq.is_number_integer()) throw DecodeError("bad seq");
    if (seq.is_number_integer() && seq.get<int64_t>() < 0) throw DecodeError("negative seq");
    m.seq = seq.get<uint64_t>();
    m.type = type_from_name(require_string(j, "type"));
    m.body = require(j, "body");
    if (!m.body.is_object()) throw DecodeError("body must be an object");
    return m;
}

Bytes pack_bits(const std::vector<uint8_t>& bits) {
    Bytes out((bits.size() + 7) / 8, 0);
    for (size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] & 1) out[i / 8] |= static_cast<uint8_t>(0x80u >> (i % 8));
    }
    return out;
}

std::vector<uint8_t> unpack_bits(std::span<const uint8_t> bytes, int nbits) {
    if (nbits < 0 || bytes.size() != static_cast<size_t>((nbits + 7) / 8)) {
        throw DecodeError("bad packed bit length");
    }
    std::vector<uint8_t> bits(nbits);
    for (int i = 0; i < nbits; ++i) {
        bits[i] = (bytes[i / 8] >> (7 - i % 8)) & 1;
    }
    // Padding bits must be zero.
    for (size_t i = nbits; i < bytes.size() * 8; ++i) {
        if ((bytes[i / 8] >> (7 - i % 8)) & 1) throw DecodeError("nonzero padding bits");
    }
    return bits;
}

json to_json(const PuzzlesBody& b) {
    json keys = json::array();
    for (const auto& k : b.keys) keys.push_back(to_hex(k.perm_key));
    return json{{"n", b.n}, {"w", b.w}, {"keys", keys}};
}

PuzzlesBody puzzles_body(const json& j) {
    PuzzlesBody b;
    b.n = require_int(j, "n", 1, 1 << 20);
    b.w = require_int(j, "w", 2, 64);
    const json& keys = require(j, "keys");
    if (!keys.is_array()) throw DecodeError("keys must be an array");
    for (const auto& k : keys) {
        if (!k.is_string()) throw DecodeError("key must be hex");
        ntcf::FunctionKey fk;
        fk.width = b.w;
        fk.perm_key = array_from_hex<32>(k.get<std::string>());
        b.keys.push_back(fk);
    }
    return b;
}

json to_json(const ObligationsBody& b) {
    json arr = json::array();
    for (const auto& o : b.obligations) arr.push_back(o.image.y.hex());
    return json{{"w", b.w}, {"obligations", arr}};
}

ObligationsBody obligations_body(const json& j) {
    ObligationsBody b;
    b.w = require_int(j, "w", 2, 64);
    const json& arr = require(j, "obligations");
    if (!arr.is_array()) throw DecodeError("obligations must be an array");
    for (const auto& o : arr) {
        if (!o.is_string()) throw DecodeError("obligation must be hex");
        b.obligations.push_back(
            puzzles::Obligation{ntcf::Image{qsim::BitVec::from_hex(o.get<std::string>(), b.w)}});
    }
    return b;
}

json to_json(const TagNoteBody& b) {
    return json{{"tag", to_hex(b.tag.bytes)},
                {"wrapped_key", to_hex(b.wrapped_key.serialize())},
                {"wrapped_tag", to_hex(b.wrapped_tag.bytes)}};
}

TagNoteBody tag_note_body(const json& j) {
    TagNoteBody b;
    b.tag.bytes = require_fixed_hex<32>(j, "tag");
    b.wrapped_key = primitives::Ciphertext::parse(from_hex(require_string(j, "wrapped_key")));
    b.wrapped_tag.bytes = require_fixed_hex<32>(j, "wrapped_tag");
    return b;
}

json to_json(const VerifyInitBody& b) {
    return json{{"wrapped_key", to_hex(b.wrapped_key.serialize())},
                {"wrapped_tag", to_hex(b.wrapped_tag.bytes)}};
}

VerifyInitBody verify_init_body(const json& j) {
    VerifyInitBody b;
    b.wrapped_key = primitives::Ciphertext::parse(from_hex(require_string(j, "wrapped_key")));
    b.wrapped_tag.bytes = require_fixed_hex<32>(j, "wrapped_tag");
    return b;
}

json to_json(const ChallengeBody& b) {
    return json{{"n", static_cast<int>(b.bits.size())}, {"bits", to_hex(pack_bits(b.bits))}};
}

ChallengeBody challenge_body(const json& j) {
    int n = require_int(j, "n", 1, 1 << 20);
    return ChallengeBody{unpack_bits(from_hex(require_string(j, "bits")), n)};
}

json to_json(const AnswersBody& b) {
    json arr = json::array();
    for (const auto& a : b.answers) {
        arr.push_back(json{{"i", a.i},
                           {"kind", a.kind == puzzles::AnswerKind::Preimage ? "preimage"
                                                                            : "equation"},
                           {"payload", a.payload.hex()},
                           {"w", a.payload.width()}});
    }
    json obls = json::array();
    for (const auto& o : b.obligations) obls.push_back(o.image.y.hex());
    return json{{"answers", arr}, {"w", b.w}, {"obligations", obls}, {"tag", to_hex(b.tag.bytes)}};
}

AnswersBody answers_body(const json& j) {
    AnswersBody b;
    b.w = require_int(j, "w", 2, 64);
    const json& arr = require(j, "answers");
    if (!arr.is_array()) throw DecodeError("answers must be an array");
    for (const auto& a : arr) {
        if (!a.is_object()) throw DecodeError("answer must be an object");
        puzzles::Answer ans;
        ans.i = require_int(a, "i", 0, 1);
        std::string kind = require_string(a, "kind");
        if (kind == "preimage") {
            ans.kind = puzzles::AnswerKind::Preimage;
        } else if (kind == "equation") {
            ans.kind = puzzles::AnswerKind::Equation;
        } else {
            throw DecodeError("unknown answer kind: " + kind);
        }
        int aw = require_int(a, "w", 1, 64);
        ans.payload = qsim::BitVec::from_hex(require_string(a, "payload"), aw);
        b.answers.push_back(ans);
    }
    const json& obls = require(j, "obligations");
    if (!obls.is_array()) throw DecodeError("obligations must be an array");
    for (const auto& o : obls) {
        if (!o.is_string()) throw DecodeError("obligation must be hex");
        b.obligations.push_back(
            puzzles::Obligation{ntcf::Image{qsim::BitVec::from_hex(o.get<std::string>(), b.w)}});
    }
    b.tag.bytes = require_fixed_hex<32>(j, "tag");
    return b;
}

json to_json(const ResultBody& b) {
    return json{{"accepted", b.accepted}, {"code", b.code}};
}

ResultBody result_body(const json& j) {
    const json& acc = require(j, "accepted");
    if (!acc.is_boolean()) throw DecodeError("accepted must be a boolean");
    return ResultBody{acc.get<bool>(), require_string(j, "code")};
}

json to_json(const PMintSerialBody& b) {
    return json{{"serial", to_hex(b.serial)}};
}

PMintSerialBody p_mint_serial_body(const json& j) {
    return PMintSerialBody{require_fixed_hex<32>(j, "serial")};
}

json to_json(const PSignatureBody& b) {
    return json{{"signature", to_hex(b.signature)}};
}

PSignatureBody p_signature_body(const json& j) {
    return PSignatureBody{from_hex(require_string(j, "signature"))};
}

json to_json(const PSpendBody& b) {
    return json{{"serial", to_hex(b.serial)},
                {"signature", to_hex(b.signature)},
                {"certificate", to_hex(b.certificate)}};
}

PSpendBody p_spend_body(const json& j) {
    PSpendBody b;
    b.serial = require_fixed_hex<32>(j, "serial");
    b.signature = from_hex(require_string(j, "signature"));
    b.certificate = require_fixed_hex<32>(j, "certificate");
    return b;
}

json to_json(const ErrorBody& b) {
    return json{{"message", b.message}};
}

ErrorBody error_body(const json& j) {
    return ErrorBody{require_string(j, "message")};
}

std::string fresh_session_id(Rng& rng) {
    return to_hex(rng.bytes<8>());
}

}  // namespace semiqm::wire
