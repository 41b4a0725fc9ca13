#include "streamnet/hash.hpp"

#include <openssl/evp.h>

#include <stdexcept>

namespace streamnet {

Hash256 sha256(const uint8_t* data, size_t len) {
    Hash256 out;
    unsigned int outlen = 0;
    if (!EVP_Digest(data, len, out.v.data(), &outlen, EVP_sha256(), nullptr) || outlen != 32)
        throw std::runtime_error("sha256: digest failure");
    return out;
}

static const char* kHexDigits = "0123456789abcdef";

std::string bytes_to_hex(const uint8_t* data, size_t len) {
    std::string s;
    s.reserve(len * 2);
    for (size_t i = 0; i < len; ++i) {
        s.push_back(kHexDigits[data[i] >> 4]);
        s.push_back(kHexDigits[data[i] & 0xf]);
    }
    return s;
}

static int hex_val(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

std::vector<uint8_t> hex_to_bytes(const std::string& s) {
    if (s.size() % 2)
        throw std::invalid_argument("hex string has odd length");
    std::vector<uint8_t> out(s.size() / 2);
    for (size_t i = 0; i < out.size(); ++i) {
        int hi = hex_val(s[2 * i]), lo = hex_val(s[2 * i + 1]);
        if (hi < 0 || lo < 0)
            throw std::invalid_argument("invalid hex character");
        out[i] = static_cast<uint8_t>(hi << 4 | lo);
    }
    return out;
}

std::string to_hex(const Hash256& h) {
    return bytes_to_hex(h.v.data(), h.v.size());
}

Hash256 hash_from_hex(const std::string& s) {
    if (s.size() != 64)
        throw std::invalid_argument("hash hex must be 64 chars");
    auto bytes = hex_to_bytes(s);
    Hash256 h;
    std::memcpy(h.v.data(), bytes.data(), 32);
    return h;
}

int leading_zero_bits(const Hash256& h) {
    int bits = 0;
    for (uint8_t b : h.v) {
        if (b == 0) {
            bits += 8;
            continue;
        }
        for (int i = 7; i >= 0; --i) {
            if (b & (1u << i)) return bits;
            ++bits;
        }
    }
    return bits;
}

}  // namespace streamnet
