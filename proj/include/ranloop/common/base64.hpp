#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ranloop {

std::string base64_encode(const uint8_t* data, size_t n);
inline std::string base64_encode(const std::vector<uint8_t>& b) {
    return base64_encode(b.data(), b.size());
}

// Strict decoder: standard alphabet, '=' padding only at the end.
// Throws std::invalid_argument on malformed input.
std::vector<uint8_t> base64_decode(const std::string& s);

}  // namespace ranloop
