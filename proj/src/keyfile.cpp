#include "semiqm/keyfile.hpp"

#include <fstream>
#include <sstream>

namespace semiqm::bank {

using wire::json;

BankKeyFile BankKeyFile::generate(int lambda, std::optional<int> n, std::optional<int> w,
                                  Rng& rng) {
    BankKeyFile kf;
    kf.lambda = lambda;
    kf.n = n;
    kf.w = w;
    kf.full_key = money::full_keygen(rng);
    kf.sig = primitives::sig_keygen(rng);
    kf.lightning_domain = lightning::ql_setup(lambda, rng).domain;
    return kf;
}

std::string BankKeyFile::dump() const {
    json j;
    j["version"] = version;
    j["lambda"] = lambda;
    if (n) j["n"] = *n;
    if (w) j["w"] = *w;
    j["mac_key"] = to_hex(full_key.mac_key.bytes);
    j["enc_key"] = to_hex(full_key.enc_key.bytes);
    j["sig_sk"] = to_hex(sig.sk_seed);
    j["sig_pk"] = to_hex(sig.pk);
    j["lightning_domain"] = to_hex(lightning_domain);
    return j.dump(2) + "\n";
}

BankKeyFile BankKeyFile::parse(const std::string& text) {
    json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded() || !j.is_object()) throw DecodeError("malformed key file");
    BankKeyFile kf;
    if (!j.contains("version") || !j["version"].is_number_integer() || j["version"] != 1) {
        throw DecodeError("unsupported key file version");
    }
    if (!j.contains("lambda") || !j["lambda"].is_number_integer()) {
        throw DecodeError("key file missing lambda");
    }
    kf.lambda = j["lambda"].get<int>();
    if (j.contains("n")) kf.n = j["n"].get<int>();
    if (j.contains("w")) kf.w = j["w"].get<int>();
    auto hex_field = [&](const char* key) {
        if (!j.contains(key) || !j[key].is_string()) {
            throw DecodeError(std::string("key file missing field: ") + key);
        }
        return j[key].get<std::string>();
    };
    kf.full_key.mac_key.bytes = array_from_hex<32>(hex_field("mac_key"));
    kf.full_key.enc_key.bytes = array_from_hex<32>(hex_field("enc_key"));
    kf.sig.sk_seed = array_from_hex<32>(hex_field("sig_sk"));
    kf.sig.pk = array_from_hex<32>(hex_field("sig_pk"));
    kf.lightning_domain = array_from_hex<32>(hex_field("lightning_domain"));
    return kf;
}

void BankKeyFile::save(const std::string& path) const {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write key file: " + path);
    out << dump();
}

BankKeyFile BankKeyFile::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read key file: " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return parse(text.str());
}

lightning::PublicKeyBundle BankKeyFile::public_bundle() const {
    lightning::PublicKeyBundle pk;
    pk.suite.domain = lightning_domain;
    pk.sig_pk = sig.pk;
    return pk;
}

std::string BankKeyFile::public_bundle_dump() const {
    json j;
    j["version"] = 1;
    j["lightning_domain"] = to_hex(lightning_domain);
    j["sig_pk"] = to_hex(sig.pk);
    return j.dump(2) + "\n";
}

lightning::PublicKeyBundle parse_public_bundle(const std::string& text) {
    json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded() || !j.is_object() || !j.contains("lightning_domain") ||
        !j.contains("sig_pk")) {
        throw DecodeError("malformed public key bundle");
    }
    lightning::PublicKeyBundle pk;
    pk.suite.domain = array_from_hex<32>(j["lightning_domain"].get<std::string>());
    pk.sig_pk = array_from_hex<32>(j["sig_pk"].get<std::string>());
    return pk;
}

lightning::PublicKeyBundle load_public_bundle(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read public key bundle: " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return parse_public_bundle(text.str());
}

}  // namespace semiqm::bank
