#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "ranloop/drl/mlp.hpp"
#include "ranloop/e2/messages.hpp"
#include "ranloop/ran/types.hpp"

namespace ranloop::drl {

inline constexpr size_t kEncoderFeatures = 6;
inline constexpr size_t kEncoderHistory = 4;  // T windows
static_assert(kEncoderFeatures * kEncoderHistory == kStateDim);

// Normalization constants; stored with the model in the catalog so an entry
// is tied to the PRB grid it was trained on.
struct EncoderConfig {
    uint16_t n_prbs = 15;
    double max_rate_per_prb_bps = 832000.0;
    double buffer_log_norm_bytes = 1e6;  // log1p scale for the queue feature
    double ue_count_norm = 16.0;

    bool operator==(const EncoderConfig&) const = default;
};

// Six symmetric statistics per window, newest window last, zero-padded (with
// the current quota share) when fewer than T windows exist:
//   1. sum dl_thr_bps / (n_prbs * max_rate_per_prb)
//   2. mean cqi / 15
//   3. log1p(sum dl_buffer) / log1p(buffer_norm)
//   4. sum granted / sum requested PRBs (1 if no requests, capped at 1)
//   5. num_ues / ue_count_norm
//   6. window slice_prbs / n_prbs
// Aggregations are permutation-invariant over UE records and the output
// dimension never depends on the UE count.
std::array<double, kStateDim> encode_state(const EncoderConfig& cfg,
                                           std::span<const e2::IndicationPayload> history,
                                           uint16_t slice_prbs, uint16_t n_prbs);

// Per-slice reward from one KPI window.
//   eMBB / MTC: sum dl_thr_bps / (slice_prbs * max_rate_per_prb), in [0,1];
//               0 when the slice holds no PRBs.
//   URLLC:      -min(sum dl_buffer_bytes / 1e5, 1)  (buffer as latency proxy)
inline constexpr double kUrllcBufferRefBytes = 1e5;
double compute_reward(ran::SliceType slice_type, const e2::IndicationPayload& report,
                      double max_rate_per_prb_bps = 832000.0);

}  // namespace ranloop::drl
