#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "ranloop/harness/scenario.hpp"
#include "ranloop/sim/bs.hpp"

namespace ranloop::harness {

inline constexpr double kPrbBandwidthHz = 180000.0;

// Sum of per-UE downlink throughput over the PRBs held by the slice, in
// bits/s/Hz. Callers skip windows with slice_prbs == 0.
double spectral_efficiency(const sim::KpiReport& report);

// Empirical CDF over distinct sample values, right-continuous, last
// fraction 1. Throws std::invalid_argument on empty input.
std::vector<std::pair<double, double>> compute_cdf(std::vector<double> samples);

// Per-slice measurement series for one run.
struct SliceSeries {
    ran::SliceType slice_type = ran::SliceType::EMBB;
    std::vector<double> spectral_efficiency;  // one sample per (bs, window)
    std::vector<double> buffer_bytes;         // slice buffer snapshot per window
    std::vector<double> rewards;
};

struct ExperimentSummary {
    std::string mode;
    uint64_t seed = 0;
    uint64_t duration_ms = 0;
    uint16_t n_prbs = 0;
    uint64_t windows = 0;
    uint64_t controls_applied = 0;
    double wall_seconds = 0.0;
    std::map<uint32_t, SliceSeries> slices;  // keyed by slice_id
    // (slice_type, slice_prbs, policy) -> windows observed
    std::map<std::tuple<uint8_t, uint16_t, uint8_t>, uint64_t> action_counts;
};

void save_summary(const ExperimentSummary& s, const std::filesystem::path& path);
ExperimentSummary load_summary(const std::filesystem::path& path);

struct ActionCell {
    ran::SliceType slice_type;
    uint16_t slice_prbs = 0;
    std::array<double, 3> fractions{};  // indexed by policy wire code
    uint64_t windows = 0;
};

// Fig. 6 style table: policy-selection fractions per (slice type,
// slice PRBs); rows sum to 1, unvisited cells omitted.
std::vector<ActionCell> action_distribution(const ExperimentSummary& s);

// Emits cdf_<slice>_{se,buffer}.csv and action_distribution.csv next to the
// summary. Returns the files written.
std::vector<std::filesystem::path> write_report_files(const ExperimentSummary& s,
                                                      const std::filesystem::path& out_dir);

}  // namespace ranloop::harness
