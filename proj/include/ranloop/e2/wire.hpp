#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <variant>

#include "ranloop/common/bytes.hpp"

// Frame layer of the e2lite protocol.
//
//   [magic 0xE2 0x5A][version 0x01][msg_type u8][length u32 BE][payload]
//
// length counts payload bytes only; the header is 8 bytes. All integers are
// big-endian. Payloads are capped at 2^24 bytes.

namespace ranloop::e2 {

inline constexpr uint8_t kMagic0 = 0xE2;
inline constexpr uint8_t kMagic1 = 0x5A;
inline constexpr uint8_t kVersion = 0x01;
inline constexpr size_t kHeaderSize = 8;
inline constexpr uint32_t kMaxPayload = 1u << 24;

enum class MsgType : uint8_t {
    E2SetupReq = 0x01,
    E2SetupResp = 0x02,
    RicSubReq = 0x03,
    RicSubResp = 0x04,
    RicIndication = 0x05,
    RicControl = 0x06,
    RicControlAck = 0x07,
};

// Thrown on unrecoverable stream corruption (bad magic/version, length
// overflow). The owning connection must be dropped.
class ProtocolError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Recoverable message-level decode failure (truncated payload, bad field);
// stream framing stays intact.
class DecodeError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct Frame {
    uint8_t msg_type = 0;  // raw code; may be outside MsgType
    Bytes payload;
};

struct DecodedFrame {
    Frame frame;
    size_t consumed = 0;
};

// Bytes still required before the frame at the head of the stream can be
// decoded.
struct NeedMore {
    size_t bytes = 0;
};

using DecodeResult = std::variant<DecodedFrame, NeedMore>;

Bytes encode_frame(MsgType type, std::span<const uint8_t> payload);
Bytes encode_frame(uint8_t raw_type, std::span<const uint8_t> payload);

// Decodes exactly one frame from the head of `data`, or reports how many
// more bytes are needed. Throws ProtocolError on bad magic/version or a
// length above kMaxPayload. Trailing bytes are left untouched.
DecodeResult decode_frame(std::span<const uint8_t> data);

}  // namespace ranloop::e2
