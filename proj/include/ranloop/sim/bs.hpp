#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include "ranloop/e2/messages.hpp"
#include "ranloop/ran/channel.hpp"
#include "ranloop/ran/link.hpp"
#include "ranloop/ran/scheduler.hpp"
#include "ranloop/ran/traffic.hpp"
#include "ranloop/ran/types.hpp"

namespace ranloop::sim {

inline constexpr uint32_t kTtiMs = 1;
inline constexpr uint32_t kKpiWindowMs = 500;
inline constexpr uint32_t kChannelStepMs = 10;

struct QuotaEntry {
    uint64_t t_start_ms = 0;
    std::map<uint32_t, uint16_t> quotas;  // slice_id -> prb_quota
};

struct QuotaSchedule {
    std::vector<QuotaEntry> entries;  // time-sorted

    // Throws ran::ConfigError when entries are unsorted or a quota sum
    // exceeds the grid.
    void validate(uint16_t n_prbs) const;
};

// One closed 500 ms measurement window for one slice.
struct KpiReport {
    uint32_t bs_id = 0;
    uint32_t slice_id = 0;
    uint64_t window_start_ms = 0;
    uint32_t window_len_ms = kKpiWindowMs;
    ran::SchedulingPolicy policy = ran::SchedulingPolicy::RR;
    uint16_t slice_prbs = 0;
    std::vector<e2::UeRecord> records;  // one per active UE, ascending ue_id
};

struct SliceSpec {
    uint32_t slice_id = 0;
    ran::SliceType slice_type = ran::SliceType::EMBB;
    std::vector<uint32_t> ue_ids;
    uint16_t prb_quota = 0;
    ran::SchedulingPolicy policy = ran::SchedulingPolicy::RR;
    ran::TrafficModel traffic;
};

struct BsConfig {
    uint32_t bs_id = 0;
    ran::Vec2 position;
    uint16_t n_prbs = 15;
    std::vector<SliceSpec> slices;
    ran::ChannelParams channel;
    QuotaSchedule schedule;
    // Distance of the UE mobility-disc center from the BS; the offline
    // trainer varies this per episode.
    double ue_home_offset_m = 0.0;
};

// One base station advanced in 1 ms TTIs. Owns its UEs, traffic sources and
// per-UE RNG streams (derived from the master seed, independent of control
// decisions so paired-seed runs share realizations).
class BaseStation {
  public:
    BaseStation(const BsConfig& cfg, uint64_t seed);

    // One TTI: schedule-quota boundary, traffic arrivals, channel step every
    // 10 ms, per-slice scheduling, service, window accounting.
    void run_tti();

    // True right after the TTI that closed a 500 ms window.
    bool window_due() const { return clock_ms_ > 0 && clock_ms_ % kKpiWindowMs == 0; }

    // Emits one report per slice and resets the window accumulators.
    std::vector<KpiReport> close_windows();

    // Policy switch for one slice; takes effect at the next TTI (the RR
    // pointer survives). Returns false for an unknown slice.
    bool apply_control(uint32_t slice_id, ran::SchedulingPolicy policy);

    uint32_t bs_id() const { return cfg_.bs_id; }
    uint64_t clock_ms() const { return clock_ms_; }
    uint16_t n_prbs() const { return cfg_.n_prbs; }
    const std::vector<SliceSpec>& slices() const { return cfg_.slices; }
    ran::SchedulingPolicy slice_policy(uint32_t slice_id) const;
    uint16_t slice_quota(uint32_t slice_id) const;

    // Byte-conservation counters (tests).
    uint64_t total_arrived() const;
    uint64_t total_served() const;
    uint64_t total_buffered() const;

  private:
    struct SliceRuntime {
        SliceSpec spec;
        uint32_t rr_next_ue = 0;
        // per-UE window sums
        std::map<uint32_t, uint32_t> granted;
        std::map<uint32_t, uint32_t> requested;
    };

    void apply_schedule_boundary();
    void schedule_and_serve(SliceRuntime& sl);

    BsConfig cfg_;
    uint64_t clock_ms_ = 0;
    size_t next_schedule_entry_ = 0;
    std::vector<SliceRuntime> slices_;
    std::vector<ran::UeState> ues_;
    std::map<uint32_t, ran::UeState*> ue_index_;
    std::map<uint32_t, ran::TrafficSource> traffic_;
    std::map<uint32_t, std::mt19937_64> traffic_rng_;
    std::map<uint32_t, std::mt19937_64> channel_rng_;
};

}  // namespace ranloop::sim
