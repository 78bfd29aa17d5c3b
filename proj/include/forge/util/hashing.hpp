#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace forge::util {

std::array<std::uint8_t, 32> sha256(std::string_view data);

// hex(sha256(data))
std::string sha256_hex(std::string_view data);

std::array<std::uint8_t, 32> hmac_sha256(std::string_view key, std::string_view data);

std::string hmac_sha256_hex(std::string_view key, std::string_view data);

// Timing-safe equality; compares full length even on early mismatch.
bool constant_time_equal(std::string_view a, std::string_view b);

// Cryptographically random bytes rendered as lowercase hex.
std::string random_hex(std::size_t n_bytes);

}  // namespace forge::util
