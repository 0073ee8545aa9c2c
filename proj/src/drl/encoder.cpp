#include "ranloop/drl/encoder.hpp"

#include <algorithm>
#include <cmath>

namespace ranloop::drl {

namespace {

void window_features(const EncoderConfig& cfg, const e2::IndicationPayload& w, uint16_t n_prbs,
                     double* out) {
    double thr = 0.0, buffer = 0.0, granted = 0.0, requested = 0.0, cqi = 0.0;
    for (const auto& r : w.records) {
        thr += r.dl_thr_bps;
        buffer += r.dl_buffer_bytes;
        granted += r.granted_prbs;
        requested += r.requested_prbs;
        cqi += r.dl_cqi;
    }
    double n_ues = static_cast<double>(w.records.size());
    double grid = std::max<double>(n_prbs, 1);

    out[0] = thr / (grid * cfg.max_rate_per_prb_bps);
    out[1] = n_ues > 0 ? (cqi / n_ues) / 15.0 : 0.0;
    out[2] = std::log1p(buffer) / std::log1p(cfg.buffer_log_norm_bytes);
    out[3] = requested > 0 ? std::min(1.0, granted / requested) : 1.0;
    out[4] = n_ues / cfg.ue_count_norm;
    out[5] = static_cast<double>(w.slice_prbs) / grid;
}

}  // namespace

std::array<double, kStateDim> encode_state(const EncoderConfig& cfg,
                                           std::span<const e2::IndicationPayload> history,
                                           uint16_t slice_prbs, uint16_t n_prbs) {
    std::array<double, kStateDim> state{};

    // Keep the newest T windows, oldest first; pad the old side.
    size_t have = std::min(history.size(), kEncoderHistory);
    size_t pad = kEncoderHistory - have;

    e2::IndicationPayload zero;
    zero.slice_prbs = slice_prbs;
    for (size_t i = 0; i < pad; ++i)
        window_features(cfg, zero, n_prbs, state.data() + i * kEncoderFeatures);
    for (size_t i = 0; i < have; ++i) {
        const auto& w = history[history.size() - have + i];
        window_features(cfg, w, n_prbs, state.data() + (pad + i) * kEncoderFeatures);
    }
    return state;
}

double compute_reward(ran::SliceType slice_type, const e2::IndicationPayload& report,
                      double max_rate_per_prb_bps) {
    double thr = 0.0, buffer = 0.0;
    for (const auto& r : report.records) {
        thr += r.dl_thr_bps;
        buffer += r.dl_buffer_bytes;
    }
    switch (slice_type) {
        case ran::SliceType::EMBB:
        case ran::SliceType::MTC: {
            if (report.slice_prbs == 0) return 0.0;
            double r = thr / (static_cast<double>(report.slice_prbs) * max_rate_per_prb_bps);
            return std::clamp(r, 0.0, 1.0);
        }
        case ran::SliceType::URLLC:
            return -std::min(buffer / kUrllcBufferRefBytes, 1.0);
    }
    return 0.0;
}

}  // namespace ranloop::drl
