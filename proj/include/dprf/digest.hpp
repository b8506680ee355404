#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace dprf {

// 64-bit FNV-1a. Used for content digests (persona provenance, manifest
// identity, template checksum pins) -- not a cryptographic hash.
inline std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char byte : data) {
        hash ^= static_cast<std::uint64_t>(byte);
        hash *= 0x00000100000001b3ULL;
    }
    return hash;
}

inline std::string digest_hex(std::string_view data) {
    static const char* hex = "0123456789abcdef";
    std::uint64_t h = fnv1a64(data);
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = hex[h & 0xf];
        h >>= 4;
    }
    return out;
}

}  // namespace dprf
