#include "forge/util/hashing.hpp"

#include <openssl/crypto.h>
#include <openssl/hmac.h>
#include <openssl/rand.h>
#include <openssl/sha.h>

#include <stdexcept>

#include "forge/util/hex.hpp"

namespace forge::util {

std::array<std::uint8_t, 32> sha256(std::string_view data) {
    std::array<std::uint8_t, 32> digest{};
    SHA256(reinterpret_cast<const unsigned char*>(data.data()), data.size(), digest.data());
    return digest;
}

std::string sha256_hex(std::string_view data) {
    auto d = sha256(data);
    return to_hex(d);
}

std::array<std::uint8_t, 32> hmac_sha256(std::string_view key, std::string_view data) {
    std::array<std::uint8_t, 32> mac{};
    unsigned int mac_len = 0;
    HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()),
         reinterpret_cast<const unsigned char*>(data.data()), data.size(), mac.data(), &mac_len);
    if (mac_len != mac.size()) throw std::runtime_error("hmac_sha256: unexpected digest length");
    return mac;
}

std::string hmac_sha256_hex(std::string_view key, std::string_view data) {
    auto mac = hmac_sha256(key, data);
    return to_hex(mac);
}

bool constant_time_equal(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    return CRYPTO_memcmp(a.data(), b.data(), a.size()) == 0;
}

std::string random_hex(std::size_t n_bytes) {
    std::vector<std::uint8_t> buf(n_bytes);
    if (RAND_bytes(buf.data(), static_cast<int>(buf.size())) != 1)
        throw std::runtime_error("random_hex: RAND_bytes failed");
    return to_hex(buf);
}

}  // namespace forge::util
