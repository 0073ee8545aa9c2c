#pragma once

#include <cstdint>
#include <cstddef>

namespace ranloop {

// FNV-1a 64-bit, used as the integrity checksum over catalog weight bytes.
inline uint64_t fnv1a64(const uint8_t* data, size_t n, uint64_t h = 0xcbf29ce484222325ULL) {
    for (size_t i = 0; i < n; ++i) {
        h ^= data[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace ranloop
