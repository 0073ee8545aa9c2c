#pragma once

#include <cstdint>
#include <cstddef>
#include <string>
#include <vector>

// Big-endian byte packing helpers shared by the e2lite codec and the
// model catalog. All multi-byte integers on the wire are network order.

namespace ranloop {

using Bytes = std::vector<uint8_t>;

inline void put_u8(Bytes& b, uint8_t v) { b.push_back(v); }

inline void put_u16(Bytes& b, uint16_t v) {
    b.push_back(static_cast<uint8_t>(v >> 8));
    b.push_back(static_cast<uint8_t>(v));
}

inline void put_u32(Bytes& b, uint32_t v) {
    for (int i = 3; i >= 0; --i) b.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

inline void put_u64(Bytes& b, uint64_t v) {
    for (int i = 7; i >= 0; --i) b.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

inline void put_i16(Bytes& b, int16_t v) { put_u16(b, static_cast<uint16_t>(v)); }

inline uint8_t get_u8(const uint8_t* p) { return p[0]; }

inline uint16_t get_u16(const uint8_t* p) {
    return static_cast<uint16_t>((p[0] << 8) | p[1]);
}

inline uint32_t get_u32(const uint8_t* p) {
    return (static_cast<uint32_t>(p[0]) << 24) | (static_cast<uint32_t>(p[1]) << 16) |
           (static_cast<uint32_t>(p[2]) << 8) | static_cast<uint32_t>(p[3]);
}

inline uint64_t get_u64(const uint8_t* p) {
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | p[i];
    return v;
}

inline int16_t get_i16(const uint8_t* p) { return static_cast<int16_t>(get_u16(p)); }

std::string to_hex(const uint8_t* data, size_t n);
inline std::string to_hex(const Bytes& b) { return to_hex(b.data(), b.size()); }

// Throws std::invalid_argument on odd length or non-hex characters.
Bytes from_hex(const std::string& hex);

}  // namespace ranloop
