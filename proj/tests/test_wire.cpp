#include <doctest.h>

#include "semiqm/wire.hpp"

using namespace semiqm;
using namespace semiqm::wire;

namespace {

WireMessage random_message(Rng& rng) {
    static const MsgType kTypes[] = {
        MsgType::MintInit, MsgType::Puzzles,     MsgType::Obligations, MsgType::TagNote,
        MsgType::VerifyInit, MsgType::Challenge, MsgType::Answers,     MsgType::Result,
        MsgType::PMintSerial, MsgType::PSignature, MsgType::PSpend,    MsgType::Error,
    };
    WireMessage m;
    m.session = fresh_session_id(rng);
    m.seq = rng.below(1 << 20);
    m.type = kTypes[rng.below(std::size(kTypes))];
    switch (m.type) {
        case MsgType::Puzzles: {
            PuzzlesBody b;
            b.n = 2;
            b.w = 16;
            for (int i = 0; i < 2; ++i) {
                ntcf::FunctionKey k;
                k.width = 16;
                k.perm_key = rng.bytes<32>();
                b.keys.push_back(k);
            }
            m.body = to_json(b);
            break;
        }
        case MsgType::Obligations: {
            ObligationsBody b;
            b.w = 12;
            for (int i = 0; i < 3; ++i) {
                b.obligations.push_back(
                    puzzles::Obligation{ntcf::Image{qsim::BitVec::random(12, rng)}});
            }
            m.body = to_json(b);
            break;
        }
        case MsgType::TagNote: {
            TagNoteBody b;
            b.tag.bytes = rng.bytes<32>();
            b.wrapped_key.nonce = rng.bytes<16>();
            b.wrapped_key.body = Bytes(17, 0xee);
            b.wrapped_tag.bytes = rng.bytes<32>();
            m.body = to_json(b);
            break;
        }
        case MsgType::VerifyInit: {
            VerifyInitBody b;
            b.wrapped_key.nonce = rng.bytes<16>();
            b.wrapped_key.body = Bytes(9, 0x11);
            b.wrapped_tag.bytes = rng.bytes<32>();
            m.body = to_json(b);
            break;
        }
        case MsgType::Challenge: {
            ChallengeBody b;
            for (int i = 0; i < 11; ++i) b.bits.push_back(static_cast<uint8_t>(rng.bit()));
            m.body = to_json(b);
            break;
        }
        case MsgType::Answers: {
            AnswersBody b;
            b.w = 10;
            b.tag.bytes = rng.bytes<32>();
            for (int i = 0; i < 2; ++i) {
                b.obligations.push_back(
                    puzzles::Obligation{ntcf::Image{qsim::BitVec::random(10, rng)}});
                b.answers.push_back(puzzles::Answer{
                    rng.bit(), qsim::BitVec::random(10, rng),
                    rng.bit() ? puzzles::AnswerKind::Preimage : puzzles::AnswerKind::Equation});
            }
            m.body = to_json(b);
            break;
        }
        case MsgType::Result:
            m.body = to_json(ResultBody{rng.bit() == 1, "OK"});
            break;
        case MsgType::PMintSerial:
            m.body = to_json(PMintSerialBody{rng.bytes<32>()});
            break;
        case MsgType::PSignature: {
            Bytes sig(64);
            rng.fill(sig);
            m.body = to_json(PSignatureBody{sig});
            break;
        }
        case MsgType::PSpend: {
            PSpendBody b;
            b.serial = rng.bytes<32>();
            b.signature = Bytes(64, 3);
            b.certificate = rng.bytes<32>();
            m.body = to_json(b);
            break;
        }
        case MsgType::Error:
            m.body = to_json(ErrorBody{"boom"});
            break;
        default:
            m.body = json::object();
            break;
    }
    return m;
}

}  // namespace

TEST_CASE("decode(encode(m)) is the identity across all message types") {
    Rng rng(71);
    for (int t = 0; t < 1000; ++t) {
        WireMessage m = random_message(rng);
        std::string line = encode(m);
        CHECK(line.back() == '\n');
        CHECK(line.find('\n') == line.size() - 1);  // single line
        WireMessage back = decode(line);
        CHECK(back == m);
    }
}

TEST_CASE("typed bodies decode back to equal values") {
    Rng rng(72);
    for (int t = 0; t < 200; ++t) {
        WireMessage m = random_message(rng);
        switch (m.type) {
            case MsgType::Puzzles: {
                PuzzlesBody b = puzzles_body(m.body);
                CHECK(to_json(b) == m.body);
                break;
            }
            case MsgType::Answers: {
                AnswersBody b = answers_body(m.body);
                CHECK(to_json(b) == m.body);
                break;
            }
            case MsgType::Challenge: {
                ChallengeBody b = challenge_body(m.body);
                CHECK(to_json(b) == m.body);
                break;
            }
            default:
                break;
        }
    }
}

TEST_CASE("malformed lines and envelopes are rejected") {
    Rng rng(73);
    WireMessage m = random_message(rng);
    std::string line = encode(m);

    CHECK_THROWS_AS(decode(line.substr(0, line.size() / 2)), DecodeError);
    CHECK_THROWS_AS(decode("not json at all\n"), DecodeError);
    CHECK_THROWS_AS(decode("[1,2,3]\n"), DecodeError);

    json j = json::parse(line);
    j["extra"] = 1;
    CHECK_THROWS_AS(decode(j.dump() + "\n"), DecodeError);
    json missing = json::parse(line);
    missing.erase("seq");
    CHECK_THROWS_AS(decode(missing.dump() + "\n"), DecodeError);
    json bad_type = json::parse(line);
    bad_type["type"] = "NO_SUCH_TYPE";
    CHECK_THROWS_AS(decode(bad_type.dump() + "\n"), DecodeError);
    json bad_session = json::parse(line);
    bad_session["session"] = "abc";
    CHECK_THROWS_AS(decode(bad_session.dump() + "\n"), DecodeError);
}

TEST_CASE("bit packing follows the BitVec rule") {
    CHECK(qsim::BitVec(0b1010, 4).hex() == "a0");
    std::vector<uint8_t> bits = {1, 0, 1, 0};
    CHECK(to_hex(pack_bits(bits)) == "a0");
    std::vector<uint8_t> nine = {1, 1, 1, 1, 1, 1, 1, 1, 1};
    CHECK(to_hex(pack_bits(nine)) == "ff80");
    CHECK(unpack_bits(pack_bits(nine), 9) == nine);
    // Nonzero padding rejected.
    CHECK_THROWS_AS(unpack_bits(from_hex("ffc0"), 9), DecodeError);
    CHECK_THROWS_AS(unpack_bits(from_hex("ff"), 9), DecodeError);
}
