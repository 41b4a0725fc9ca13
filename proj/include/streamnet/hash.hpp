#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

namespace streamnet {

// 32-byte SHA-256 digest. Block and transaction ids are Hash256 values;
// ordering is lexicographic on the raw bytes and is used as the global
// deterministic tie-breaker.
struct Hash256 {
    std::array<uint8_t, 32> v{};

    auto operator<=>(const Hash256&) const = default;
    bool is_zero() const {
        for (uint8_t b : v)
            if (b) return false;
        return true;
    }
};

using BlockId = Hash256;
using TxnId = Hash256;

Hash256 sha256(const uint8_t* data, size_t len);
inline Hash256 sha256(const std::vector<uint8_t>& data) {
    return sha256(data.data(), data.size());
}
inline Hash256 sha256(const std::string& data) {
    return sha256(reinterpret_cast<const uint8_t*>(data.data()), data.size());
}

std::string to_hex(const Hash256& h);
// Accepts exactly 64 lowercase/uppercase hex chars; throws std::invalid_argument otherwise.
Hash256 hash_from_hex(const std::string& s);

std::string bytes_to_hex(const uint8_t* data, size_t len);
inline std::string bytes_to_hex(const std::string& s) {
    return bytes_to_hex(reinterpret_cast<const uint8_t*>(s.data()), s.size());
}
std::vector<uint8_t> hex_to_bytes(const std::string& s);

// Number of leading zero bits, scanning from byte 0 MSB down. Used by the
// proof-of-work check.
int leading_zero_bits(const Hash256& h);

}  // namespace streamnet
