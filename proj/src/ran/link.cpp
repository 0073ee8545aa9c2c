#include "ranloop/ran/link.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "ranloop/ran/types.hpp"

namespace ranloop::ran {

uint16_t prb_count(double bandwidth_hz) {
    struct Entry {
        double hz;
        uint16_t prbs;
    };
    static constexpr std::array<Entry, 6> kGrid = {{
        {1.4e6, 6}, {3e6, 15}, {5e6, 25}, {10e6, 50}, {15e6, 75}, {20e6, 100},
    }};
    for (const auto& e : kGrid) {
        if (std::abs(bandwidth_hz - e.hz) < 1.0) return e.prbs;
    }
    throw ConfigError("unsupported channel bandwidth: " + std::to_string(bandwidth_hz) + " Hz");
}

uint8_t cqi_from_sinr(double sinr_db) {
    int cqi = static_cast<int>(std::floor((sinr_db + 7.0) / 2.0)) + 1;
    return static_cast<uint8_t>(std::clamp(cqi, 0, 15));
}

// LTE CQI table, bits per resource element (QPSK 78/1024 .. 64QAM 948/1024).
static constexpr std::array<double, 16> kCqiEfficiency = {
    0.0,    0.1523, 0.2344, 0.3770, 0.6016, 0.8770, 1.1758, 1.4766,
    1.9141, 2.4063, 2.7305, 3.3223, 3.9023, 4.5234, 5.1152, 5.5547,
};

double cqi_to_efficiency(uint8_t cqi) {
    if (cqi > 15) throw std::domain_error("CQI out of range");
    return kCqiEfficiency[cqi];
}

uint32_t bytes_per_prb(uint8_t cqi) {
    return static_cast<uint32_t>(std::floor(cqi_to_efficiency(cqi) * kRePerPrb / 8.0));
}

double max_rate_per_prb_bps() {
    return static_cast<double>(bytes_per_prb(15)) * 8.0 * 1000.0;
}

double update_ewma(double history_bps, double served_rate_bps, double alpha) {
    double next = (1.0 - alpha) * history_bps + alpha * served_rate_bps;
    return std::max(next, kEwmaFloorBps);
}

}  // namespace ranloop::ran
