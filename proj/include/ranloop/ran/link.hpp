#pragma once

#include <cstdint>

namespace ranloop::ran {

// Usable resource elements per PRB per 1 ms TTI (168 minus control and
// reference overhead).
inline constexpr int kRePerPrb = 150;

// PF history parameters.
inline constexpr double kEwmaAlpha = 0.1;
inline constexpr double kEwmaFloorBps = 1e3;

// PRB grid size for an LTE-style carrier bandwidth.
// Supported: 1.4, 3, 5, 10, 15, 20 MHz. Throws ConfigError otherwise.
uint16_t prb_count(double bandwidth_hz);

// SINR to CQI: 2 dB steps starting at -7 dB, clamped to [0, 15].
// Anything below -7 dB is outage (CQI 0, no grants).
uint8_t cqi_from_sinr(double sinr_db);

// CQI to spectral efficiency in bits per resource element (15-entry LTE
// table, 0.1523 .. 5.5547). CQI 0 maps to 0. Throws std::domain_error for
// cqi > 15.
double cqi_to_efficiency(uint8_t cqi);

// Transport capacity of one PRB in one TTI, bytes: floor(eff * 150 / 8).
uint32_t bytes_per_prb(uint8_t cqi);

// Peak PRB rate (CQI 15): bytes_per_prb(15) * 8 * 1000 = 832000 bits/s.
// Normalization constant for encoder features, rewards and the spectral
// efficiency cap.
double max_rate_per_prb_bps();

// EWMA throughput history update, floored at kEwmaFloorBps.
double update_ewma(double history_bps, double served_rate_bps, double alpha = kEwmaAlpha);

}  // namespace ranloop::ran
