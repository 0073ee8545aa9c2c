#pragma once

#include <filesystem>
#include <map>

#include "ranloop/ran/types.hpp"
#include "ranloop/sim/runner.hpp"

namespace ranloop::harness {

// Slice-level reward of one KPI window (same functional as the DRL agents).
double report_reward(ran::SliceType slice_type, const sim::KpiReport& report);

// CSV dataset: one row per UE per 500 ms window, time-sorted. Columns:
// timestamp_ms,bs_id,slice_id,slice_type,ue_id,dl_buffer_bytes,tx_bytes,
// tx_pkts,dl_thr_bps,dl_cqi,dl_mcs,sinr_db,granted_prbs,slice_prbs,
// sched_policy,reward
void write_dataset(const std::filesystem::path& path, const sim::RunTrace& trace,
                   const std::map<uint32_t, ran::SliceType>& slice_types);

}  // namespace ranloop::harness
