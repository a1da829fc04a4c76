#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

#include "semiqm/bytes.hpp"

namespace semiqm {

using Digest = std::array<uint8_t, 32>;

Digest sha256(std::span<const uint8_t> data);

// Domain-separated PRF used internally (Feistel rounds, shift derivation,
// encryption keystream): SHA-256 over key || tag || data.
Digest keyed_hash(std::span<const uint8_t> key, std::string_view tag,
                  std::span<const uint8_t> data);

Digest hmac_sha256(std::span<const uint8_t> key, std::span<const uint8_t> msg);

// Constant-time comparison.
bool ct_equal(std::span<const uint8_t> a, std::span<const uint8_t> b);

}  // namespace semiqm
