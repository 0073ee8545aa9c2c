#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>

#include "ranloop/drl/ppo.hpp"
#include "ranloop/harness/scenario.hpp"
#include "ranloop/sim/runner.hpp"

namespace ranloop::harness {

drl::PpoConfig load_ppo_config(const std::filesystem::path& path);

// In-process sampling agents for offline training (the non-real-time role).
// Reports still travel as encoded e2lite frames; actions are sampled from
// the current policy and transitions are recorded per (bs, slice) instance.
// The reward of step t comes from window t+1's report.
class TrainingControlSource : public sim::ControlSource {
  public:
    struct SharedNets {
        std::array<drl::ActorCritic*, 3> by_type{};  // indexed by SliceType code
        drl::EncoderConfig encoder;
    };

    TrainingControlSource(std::map<uint32_t, ran::SliceType> slice_types, SharedNets nets,
                          uint64_t episode_seed);

    bool wants_reports() const override { return true; }
    std::vector<e2::Bytes> attach(uint32_t bs_id, const std::vector<e2::Bytes>& frames) override;
    std::vector<e2::Bytes> window_close(uint32_t bs_id,
                                        const std::vector<e2::Bytes>& frames) override;

    // Marks the final step of every trajectory done and returns the rollouts
    // grouped by slice type.
    std::array<std::vector<drl::Trajectory>, 3> finish();

  private:
    struct Instance {
        std::vector<e2::IndicationPayload> history;
        std::optional<drl::Step> pending;  // waiting for the next window's reward
        drl::Trajectory trajectory;
        std::mt19937_64 rng;
        ran::SliceType type = ran::SliceType::EMBB;
    };

    std::map<uint32_t, ran::SliceType> slice_types_;
    SharedNets nets_;
    uint64_t episode_seed_ = 0;
    std::map<std::pair<uint32_t, uint32_t>, Instance> instances_;
    uint32_t next_sub_id_ = 1;
};

struct TrainOptions {
    std::filesystem::path out_dir;
    int episodes = 200;
    int checkpoint_every = 50;
    std::optional<uint64_t> seed;
    drl::PpoConfig ppo;
};

struct TrainResult {
    std::filesystem::path catalog_dir;
    std::filesystem::path curve_path;
    // per episode: mean sampled reward per slice type
    std::vector<std::array<double, 3>> reward_curve;
    int episodes_completed = 0;
    bool halted_on_divergence = false;
};

// Runs sampling episodes (per-episode seeds plus BS-UE distance and mobility
// variation), one PPO update per slice type per episode, periodic
// checkpoints, and writes the final per-type catalog entries
// (embb.json / urllc.json / mtc.json) with the training curve CSV.
TrainResult train_offline(const ScenarioConfig& scenario, const TrainOptions& opts);

}  // namespace ranloop::harness
