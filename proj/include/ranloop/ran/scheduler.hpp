#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ranloop/ran/types.hpp"

namespace ranloop::ran {

// Per-UE inputs for one scheduling decision. Lists must be in ascending
// ue_id order (the canonical cyclic order); only backlogged UEs with
// cqi > 0 belong here.
struct SchedUe {
    uint32_t ue_id = 0;
    double inst_rate_bps = 0.0;   // achievable rate on one PRB (PF numerator)
    double history_bps = 0.0;     // EWMA throughput (PF denominator, >= floor)
    double efficiency = 0.0;      // bits per RE (WF level input)
};

struct RrResult {
    PrbAllocation alloc;
    uint32_t next_ue = 0;  // ue_id owed the first PRB of the next TTI
};

// Round robin: deal PRBs one at a time cyclically, starting at the first
// listed UE whose id >= start_ue (wrapping). Empty backlog returns an empty
// allocation with the pointer unchanged.
RrResult schedule_rr(std::span<const uint32_t> backlogged, uint16_t n_prbs, uint32_t start_ue);

// Proportional fair under flat fading: every PRB goes to
// argmax inst_rate / history, ties to the lowest ue_id.
PrbAllocation schedule_pf(std::span<const SchedUe> ues, uint16_t n_prbs);

// Waterfilling over inverse-efficiency levels n_u = 1/e_u: bisection for the
// water level mu with sum max(0, mu - n_u) = n_prbs, then largest-remainder
// quantization. Grants only go to UEs with positive continuous share.
PrbAllocation schedule_wf(std::span<const SchedUe> ues, uint16_t n_prbs);

// Continuous waterfilling solve, exposed for oracle tests.
// Returns the water level; shares[i] = max(0, mu - levels[i]).
double waterfill_level(std::span<const double> levels, double budget,
                       std::vector<double>* shares = nullptr);

// Largest-remainder rounding of non-negative continuous shares to integers
// summing to budget; zero shares stay zero. Remainder ties break on the
// lower index.
std::vector<uint16_t> largest_remainder(std::span<const double> shares, uint16_t budget);

}  // namespace ranloop::ran
