#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace semiqm {

using Bytes = std::vector<uint8_t>;

struct DecodeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string to_hex(std::span<const uint8_t> data);
Bytes from_hex(const std::string& hex);  // throws DecodeError on odd length / bad digit

inline Bytes to_bytes(std::string_view s) {
    return Bytes(s.begin(), s.end());
}

template <size_t N>
std::array<uint8_t, N> array_from_hex(const std::string& hex) {
    Bytes b = from_hex(hex);
    if (b.size() != N) throw DecodeError("bad field length");
    std::array<uint8_t, N> out{};
    std::copy(b.begin(), b.end(), out.begin());
    return out;
}

void append_u32_be(Bytes& out, uint32_t v);
void append_u64_be(Bytes& out, uint64_t v);

}  // namespace semiqm
