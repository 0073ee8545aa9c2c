#include "ranloop/e2/wire.hpp"

namespace ranloop::e2 {

Bytes encode_frame(uint8_t raw_type, std::span<const uint8_t> payload) {
    if (payload.size() > kMaxPayload) throw ProtocolError("payload exceeds 2^24 bytes");
    Bytes out;
    out.reserve(kHeaderSize + payload.size());
    put_u8(out, kMagic0);
    put_u8(out, kMagic1);
    put_u8(out, kVersion);
    put_u8(out, raw_type);
    put_u32(out, static_cast<uint32_t>(payload.size()));
    out.insert(out.end(), payload.begin(), payload.end());
    return out;
}

Bytes encode_frame(MsgType type, std::span<const uint8_t> payload) {
    return encode_frame(static_cast<uint8_t>(type), payload);
}

DecodeResult decode_frame(std::span<const uint8_t> data) {
    if (data.size() < kHeaderSize) return NeedMore{kHeaderSize - data.size()};
    if (data[0] != kMagic0 || data[1] != kMagic1) throw ProtocolError("bad frame magic");
    if (data[2] != kVersion) throw ProtocolError("unsupported protocol version");
    uint32_t len = get_u32(data.data() + 4);
    if (len > kMaxPayload) throw ProtocolError("frame length overflow");
    if (data.size() < kHeaderSize + len) return NeedMore{kHeaderSize + len - data.size()};

    DecodedFrame out;
    out.frame.msg_type = data[3];
    out.frame.payload.assign(data.begin() + kHeaderSize, data.begin() + kHeaderSize + len);
    out.consumed = kHeaderSize + len;
    return out;
}

}  // namespace ranloop::e2
