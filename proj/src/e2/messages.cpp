#include "ranloop/e2/messages.hpp"

namespace ranloop::e2 {

namespace {

// Bounds-checked big-endian reader.
class Reader {
  public:
    explicit Reader(std::span<const uint8_t> data) : data_(data) {}

    uint8_t u8() { return *take(1); }
    uint16_t u16() { return get_u16(take(2)); }
    uint32_t u32() { return get_u32(take(4)); }
    uint64_t u64() { return get_u64(take(8)); }
    int16_t i16() { return get_i16(take(2)); }

    void expect_end() const {
        if (pos_ != data_.size()) throw DecodeError("trailing bytes in payload");
    }

  private:
    const uint8_t* take(size_t n) {
        if (pos_ + n > data_.size()) throw DecodeError("truncated payload");
        const uint8_t* p = data_.data() + pos_;
        pos_ += n;
        return p;
    }

    std::span<const uint8_t> data_;
    size_t pos_ = 0;
};

void put_record(Bytes& out, const UeRecord& r) {
    put_u32(out, r.ue_id);
    put_u32(out, r.dl_buffer_bytes);
    put_u32(out, r.tx_bytes);
    put_u32(out, r.tx_pkts);
    put_u32(out, r.dl_thr_bps);
    put_u32(out, r.ul_thr_bps);
    put_i16(out, r.sinr_cdb);
    put_u16(out, r.granted_prbs);
    put_u16(out, r.requested_prbs);
    put_u16(out, r.bler_permille);
    put_u8(out, r.dl_cqi);
    put_u8(out, r.dl_mcs);
    put_u16(out, 0);  // reserved
}

UeRecord get_record(Reader& rd) {
    UeRecord r;
    r.ue_id = rd.u32();
    r.dl_buffer_bytes = rd.u32();
    r.tx_bytes = rd.u32();
    r.tx_pkts = rd.u32();
    r.dl_thr_bps = rd.u32();
    r.ul_thr_bps = rd.u32();
    r.sinr_cdb = rd.i16();
    r.granted_prbs = rd.u16();
    r.requested_prbs = rd.u16();
    r.bler_permille = rd.u16();
    r.dl_cqi = rd.u8();
    r.dl_mcs = rd.u8();
    if (rd.u16() != 0) throw DecodeError("reserved field must be zero");
    return r;
}

}  // namespace

Bytes encode_indication(const IndicationPayload& p) {
    if (p.records.size() > 0xFFFF) throw DecodeError("too many UE records");
    Bytes out;
    out.reserve(kIndicationHeaderSize + kUeRecordSize * p.records.size());
    put_u32(out, p.subscription_id);
    put_u32(out, p.bs_id);
    put_u8(out, p.slice_id);
    put_u64(out, p.timestamp_ms);
    put_u8(out, p.sched_policy);
    put_u16(out, p.slice_prbs);
    put_u16(out, static_cast<uint16_t>(p.records.size()));
    for (const auto& r : p.records) put_record(out, r);
    return out;
}

IndicationPayload decode_indication(std::span<const uint8_t> payload) {
    Reader rd(payload);
    IndicationPayload p;
    p.subscription_id = rd.u32();
    p.bs_id = rd.u32();
    p.slice_id = rd.u8();
    p.timestamp_ms = rd.u64();
    p.sched_policy = rd.u8();
    p.slice_prbs = rd.u16();
    uint16_t num_ues = rd.u16();
    if (payload.size() != kIndicationHeaderSize + kUeRecordSize * static_cast<size_t>(num_ues))
        throw DecodeError("indication size does not match num_ues");
    p.records.reserve(num_ues);
    for (uint16_t i = 0; i < num_ues; ++i) p.records.push_back(get_record(rd));
    rd.expect_end();
    return p;
}

Bytes encode_control(const ControlPayload& p) {
    if (p.sched_policy > 2) throw DecodeError("sched_policy wire code out of range");
    Bytes out;
    put_u32(out, p.bs_id);
    put_u8(out, p.slice_id);
    put_u8(out, p.sched_policy);
    put_u64(out, p.timestamp_ms);
    return out;
}

ControlPayload decode_control(std::span<const uint8_t> payload) {
    Reader rd(payload);
    ControlPayload p;
    p.bs_id = rd.u32();
    p.slice_id = rd.u8();
    p.sched_policy = rd.u8();
    p.timestamp_ms = rd.u64();
    rd.expect_end();
    if (p.sched_policy > 2) throw DecodeError("sched_policy wire code out of range");
    return p;
}

Bytes encode_control_ack(const ControlAckPayload& p) {
    Bytes out;
    put_u32(out, p.bs_id);
    put_u8(out, p.slice_id);
    put_u8(out, p.status);
    put_u64(out, p.timestamp_ms);
    return out;
}

ControlAckPayload decode_control_ack(std::span<const uint8_t> payload) {
    Reader rd(payload);
    ControlAckPayload p;
    p.bs_id = rd.u32();
    p.slice_id = rd.u8();
    p.status = rd.u8();
    p.timestamp_ms = rd.u64();
    rd.expect_end();
    return p;
}

Bytes encode_setup_req(const SetupReqPayload& p) {
    if (p.slices.size() > 0xFF) throw DecodeError("too many slices");
    Bytes out;
    put_u32(out, p.bs_id);
    put_u8(out, static_cast<uint8_t>(p.slices.size()));
    for (const auto& s : p.slices) {
        put_u8(out, s.slice_id);
        put_u8(out, s.slice_type);
    }
    return out;
}

SetupReqPayload decode_setup_req(std::span<const uint8_t> payload) {
    Reader rd(payload);
    SetupReqPayload p;
    p.bs_id = rd.u32();
    uint8_t n = rd.u8();
    p.slices.reserve(n);
    for (uint8_t i = 0; i < n; ++i) {
        SetupSlice s;
        s.slice_id = rd.u8();
        s.slice_type = rd.u8();
        p.slices.push_back(s);
    }
    rd.expect_end();
    return p;
}

Bytes encode_setup_resp(const SetupRespPayload& p) {
    Bytes out;
    put_u32(out, p.bs_id);
    put_u8(out, p.status);
    return out;
}

SetupRespPayload decode_setup_resp(std::span<const uint8_t> payload) {
    Reader rd(payload);
    SetupRespPayload p;
    p.bs_id = rd.u32();
    p.status = rd.u8();
    rd.expect_end();
    return p;
}

Bytes encode_sub_req(const SubReqPayload& p) {
    if (p.report_period_ms < kMinReportPeriodMs || p.report_period_ms > kMaxReportPeriodMs)
        throw DecodeError("report period outside [10, 1000] ms");
    Bytes out;
    put_u32(out, p.bs_id);
    put_u8(out, p.slice_id);
    put_u32(out, p.report_period_ms);
    return out;
}

SubReqPayload decode_sub_req(std::span<const uint8_t> payload) {
    Reader rd(payload);
    SubReqPayload p;
    p.bs_id = rd.u32();
    p.slice_id = rd.u8();
    p.report_period_ms = rd.u32();
    rd.expect_end();
    return p;
}

Bytes encode_sub_resp(const SubRespPayload& p) {
    Bytes out;
    put_u8(out, p.status);
    put_u32(out, p.subscription_id);
    return out;
}

SubRespPayload decode_sub_resp(std::span<const uint8_t> payload) {
    Reader rd(payload);
    SubRespPayload p;
    p.status = rd.u8();
    p.subscription_id = rd.u32();
    rd.expect_end();
    return p;
}

Bytes frame_indication(const IndicationPayload& p) {
    return encode_frame(MsgType::RicIndication, encode_indication(p));
}
Bytes frame_control(const ControlPayload& p) {
    return encode_frame(MsgType::RicControl, encode_control(p));
}
Bytes frame_control_ack(const ControlAckPayload& p) {
    return encode_frame(MsgType::RicControlAck, encode_control_ack(p));
}
Bytes frame_setup_req(const SetupReqPayload& p) {
    return encode_frame(MsgType::E2SetupReq, encode_setup_req(p));
}
Bytes frame_setup_resp(const SetupRespPayload& p) {
    return encode_frame(MsgType::E2SetupResp, encode_setup_resp(p));
}
Bytes frame_sub_req(const SubReqPayload& p) {
    return encode_frame(MsgType::RicSubReq, encode_sub_req(p));
}
Bytes frame_sub_resp(const SubRespPayload& p) {
    return encode_frame(MsgType::RicSubResp, encode_sub_resp(p));
}

}  // namespace ranloop::e2
