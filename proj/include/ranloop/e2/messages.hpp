#pragma once

#include <cstdint>
#include <vector>

#include "ranloop/e2/wire.hpp"

// Payload codecs for the slice-control service model. Layouts are fixed and
// big-endian; see docs/protocol.md for the byte-level tables.

namespace ranloop::e2 {

// Per-UE KPI record, exactly 36 bytes on the wire. At the 500 ms reporting
// period this costs 72 bytes/s per UE.
struct UeRecord {
    uint32_t ue_id = 0;
    uint32_t dl_buffer_bytes = 0;
    uint32_t tx_bytes = 0;
    uint32_t tx_pkts = 0;
    uint32_t dl_thr_bps = 0;
    uint32_t ul_thr_bps = 0;
    int16_t sinr_cdb = 0;  // centi-dB
    uint16_t granted_prbs = 0;
    uint16_t requested_prbs = 0;
    uint16_t bler_permille = 0;
    uint8_t dl_cqi = 0;
    uint8_t dl_mcs = 0;
    // reserved u16 = 0 closes the record

    bool operator==(const UeRecord&) const = default;
};

inline constexpr size_t kUeRecordSize = 36;
inline constexpr size_t kIndicationHeaderSize = 22;

struct IndicationPayload {
    uint32_t subscription_id = 0;
    uint32_t bs_id = 0;
    uint8_t slice_id = 0;
    uint64_t timestamp_ms = 0;
    uint8_t sched_policy = 0;
    uint16_t slice_prbs = 0;
    std::vector<UeRecord> records;

    bool operator==(const IndicationPayload&) const = default;
};

struct ControlPayload {
    uint32_t bs_id = 0;
    uint8_t slice_id = 0;
    uint8_t sched_policy = 0;  // SchedulingPolicy wire code, {0,1,2}
    uint64_t timestamp_ms = 0;

    bool operator==(const ControlPayload&) const = default;
};

// Acknowledgement of a RIC Control message; status 0 = applied,
// 1 = rejected (unknown slice).
struct ControlAckPayload {
    uint32_t bs_id = 0;
    uint8_t slice_id = 0;
    uint8_t status = 0;
    uint64_t timestamp_ms = 0;

    bool operator==(const ControlAckPayload&) const = default;
};

struct SetupSlice {
    uint8_t slice_id = 0;
    uint8_t slice_type = 0;  // SliceType wire code

    bool operator==(const SetupSlice&) const = default;
};

struct SetupReqPayload {
    uint32_t bs_id = 0;
    std::vector<SetupSlice> slices;

    bool operator==(const SetupReqPayload&) const = default;
};

struct SetupRespPayload {
    uint32_t bs_id = 0;
    uint8_t status = 0;  // 0 = accepted

    bool operator==(const SetupRespPayload&) const = default;
};

struct SubReqPayload {
    uint32_t bs_id = 0;
    uint8_t slice_id = 0;
    uint32_t report_period_ms = 0;  // near-RT bounds: [10, 1000]

    bool operator==(const SubReqPayload&) const = default;
};

struct SubRespPayload {
    uint8_t status = 0;  // 0 ok, 1 unknown BS, 2 period out of range
    uint32_t subscription_id = 0;

    bool operator==(const SubRespPayload&) const = default;
};

inline constexpr uint32_t kMinReportPeriodMs = 10;
inline constexpr uint32_t kMaxReportPeriodMs = 1000;

Bytes encode_indication(const IndicationPayload& p);
IndicationPayload decode_indication(std::span<const uint8_t> payload);

Bytes encode_control(const ControlPayload& p);
ControlPayload decode_control(std::span<const uint8_t> payload);

Bytes encode_control_ack(const ControlAckPayload& p);
ControlAckPayload decode_control_ack(std::span<const uint8_t> payload);

Bytes encode_setup_req(const SetupReqPayload& p);
SetupReqPayload decode_setup_req(std::span<const uint8_t> payload);

Bytes encode_setup_resp(const SetupRespPayload& p);
SetupRespPayload decode_setup_resp(std::span<const uint8_t> payload);

// Throws DecodeError at encode time when report_period_ms is outside
// [10, 1000] ms.
Bytes encode_sub_req(const SubReqPayload& p);
SubReqPayload decode_sub_req(std::span<const uint8_t> payload);

Bytes encode_sub_resp(const SubRespPayload& p);
SubRespPayload decode_sub_resp(std::span<const uint8_t> payload);

// Convenience: payload encoded and wrapped in a frame.
Bytes frame_indication(const IndicationPayload& p);
Bytes frame_control(const ControlPayload& p);
Bytes frame_control_ack(const ControlAckPayload& p);
Bytes frame_setup_req(const SetupReqPayload& p);
Bytes frame_setup_resp(const SetupRespPayload& p);
Bytes frame_sub_req(const SubReqPayload& p);
Bytes frame_sub_resp(const SubRespPayload& p);

}  // namespace ranloop::e2
