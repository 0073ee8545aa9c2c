#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ranloop/ran/types.hpp"
#include "ranloop/sim/bs.hpp"

namespace ranloop::harness {

struct SliceScenario {
    ran::SliceType slice_type = ran::SliceType::EMBB;
    uint16_t n_ues = 0;
    uint16_t initial_quota = 0;
    ran::TrafficModel traffic;
};

struct ControlMode {
    enum class Kind { Static, Drl } kind = Kind::Static;
    ran::SchedulingPolicy static_policy = ran::SchedulingPolicy::RR;
    std::string catalog_dir;

    std::string name() const;
};

// "static:rr" | "static:wf" | "static:pf" | "drl:<catalog-dir>"
ControlMode parse_mode(const std::string& mode);

struct TrainingVariation {
    double home_offset_max_m = 0.0;  // per-episode BS-UE distance offset
    double speed_scale_max = 1.0;    // per-episode mobility scaling
};

struct ScenarioConfig {
    uint64_t seed = 1;
    uint64_t duration_ms = 120000;
    double bandwidth_hz = 3e6;
    std::vector<ran::Vec2> bs_positions;
    std::vector<SliceScenario> slices;  // template, applied to every BS
    sim::QuotaSchedule schedule;        // quotas keyed by slice index
    ran::ChannelParams channel;
    ControlMode control;
    TrainingVariation training;

    uint16_t n_prbs() const;
    void validate() const;
};

ScenarioConfig load_scenario(const std::filesystem::path& path);

// Expands the scenario into per-BS configs with globally unique UE ids
// (slice ids are the slice indices, UE ids run sequentially across BSs).
std::vector<sim::BsConfig> build_world(const ScenarioConfig& cfg);

}  // namespace ranloop::harness
