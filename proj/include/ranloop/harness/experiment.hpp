#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>

#include "ranloop/e2/transport.hpp"
#include "ranloop/harness/report.hpp"
#include "ranloop/harness/scenario.hpp"
#include "ranloop/sim/runner.hpp"

namespace ranloop::harness {

// BS-side bridge to a RIC over TCP: one connection per BS. In deterministic
// mode the pump hook drives the in-process RIC event loop to quiescence
// between the send and the read, which keeps control arrival bit-stable.
class RicSocketSource : public sim::ControlSource {
  public:
    RicSocketSource(std::string host, uint16_t port, std::function<void()> pump = {});

    bool wants_reports() const override { return true; }
    std::vector<e2::Bytes> attach(uint32_t bs_id, const std::vector<e2::Bytes>& frames) override;
    std::vector<e2::Bytes> window_close(uint32_t bs_id,
                                        const std::vector<e2::Bytes>& frames) override;
    void deliver_acks(uint32_t bs_id, const std::vector<e2::Bytes>& frames) override;

  private:
    std::vector<e2::Bytes> collect(uint32_t bs_id, size_t expected, int timeout_ms);

    std::string host_;
    uint16_t port_;
    std::function<void()> pump_;
    std::map<uint32_t, e2::Connection> conns_;
};

struct RunOptions {
    std::optional<ControlMode> mode;  // overrides the scenario's control block
    std::optional<uint64_t> seed;     // overrides the scenario seed
    std::filesystem::path out_dir;
    bool deterministic = true;  // single-threaded, bit-reproducible
    bool write_files = true;    // dataset.csv, summary.json, ric_status.json
};

struct ExperimentResult {
    ExperimentSummary summary;
    sim::RunTrace trace;
    std::filesystem::path dataset_path;
    std::filesystem::path summary_path;
};

// Boots the world (and, in drl mode, an in-process RIC reached over
// loopback TCP), performs setup + 500 ms subscriptions, runs the scenario
// and writes dataset + summary.
ExperimentResult run_experiment(const ScenarioConfig& scenario, const RunOptions& opts);

ExperimentSummary summarize(const ScenarioConfig& scenario, const ControlMode& mode,
                            uint64_t seed, const sim::RunTrace& trace, double wall_seconds);

struct CompareOptions {
    std::vector<ControlMode> modes;
    std::vector<uint64_t> seeds;
    std::filesystem::path out_dir;
};

struct ModeAggregate {
    std::string mode;
    // per slice_id medians/means pooled over paired seeds
    std::map<uint32_t, double> median_se;
    std::map<uint32_t, double> mean_se;
    std::map<uint32_t, double> mean_buffer;
};

struct CompareReport {
    std::vector<ModeAggregate> modes;
    // (drl - best_static) / best_static per slice, when a drl mode is present
    std::map<uint32_t, double> se_delta_vs_best_static;
    std::map<uint32_t, double> buffer_delta_vs_best_static;
};

// Runs every mode on the same seeds (paired traffic/channel realizations),
// writes per-run artifacts plus comparison.json and per-(mode, slice) CDF
// files.
CompareReport compare_policies(const ScenarioConfig& scenario, const CompareOptions& opts);

}  // namespace ranloop::harness
