#pragma once

#include <array>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "ranloop/drl/mlp.hpp"

namespace ranloop::drl {

struct PpoConfig {
    double gamma = 0.99;
    double gae_lambda = 0.95;
    double clip_eps = 0.2;
    int epochs = 4;
    int minibatch = 64;
    double learning_rate = 3e-4;
    double entropy_coef = 0.01;
    double value_coef = 0.5;
    int horizon = 128;

    void validate() const;  // throws ConfigError-style std::invalid_argument
};

struct Step {
    std::array<double, kStateDim> state{};
    int action = 0;
    double log_prob = 0.0;  // under the policy at collection time
    double value = 0.0;
    double reward = 0.0;
    bool done = false;
};

using Trajectory = std::vector<Step>;

struct GaeResult {
    std::vector<double> advantages;  // raw, pre-normalization
    std::vector<double> returns;     // advantages + values
};

// delta_t = r_t + gamma * V(s_{t+1}) * (1-done) - V(s_t)
// A_t = delta_t + gamma * lambda * A_{t+1} * (1-done)
// The value after the last step is taken as 0 (trajectories end on done or
// at the horizon cut).
GaeResult gae_advantages(const Trajectory& traj, double gamma, double lambda);

// Actor and critic share shape but not weights.
struct ActorCritic {
    Mlp policy;
    Mlp value;

    static ActorCritic make(uint64_t seed);

    std::array<double, kNumActions> policy_probs(std::span<const double> state) const;
    double state_value(std::span<const double> state) const;
};

// One flattened, advantage-labelled transition batch.
struct Batch {
    std::vector<Step> steps;
    std::vector<double> advantages;  // normalized
    std::vector<double> returns;
};

// Clipped-surrogate loss over a batch:
//   L = -mean(min(r A, clip(r, 1-eps, 1+eps) A))
//       + value_coef * mean((V - ret)^2) - entropy_coef * mean(H)
// Advantages are treated as constants.
double ppo_batch_loss(const ActorCritic& ac, const Batch& batch, std::span<const size_t> idx,
                      const PpoConfig& cfg);

// Analytic gradient of ppo_batch_loss; fills both nets' gradients.
double ppo_batch_grad(const ActorCritic& ac, const Batch& batch, std::span<const size_t> idx,
                      const PpoConfig& cfg, std::vector<double>& grad_policy,
                      std::vector<double>& grad_value, double* policy_loss = nullptr,
                      double* value_loss = nullptr, double* mean_entropy = nullptr);

class Adam {
  public:
    Adam() = default;
    explicit Adam(size_t n) : m_(n, 0.0), v_(n, 0.0) {}
    void step(std::vector<double>& params, const std::vector<double>& grad, double lr);

  private:
    std::vector<double> m_;
    std::vector<double> v_;
    long t_ = 0;
};

struct AdamPair {
    Adam policy;
    Adam value;

    static AdamPair make(const ActorCritic& ac);
};

struct PpoStats {
    double policy_loss = 0.0;
    double value_loss = 0.0;
    double entropy = 0.0;
    double mean_reward = 0.0;
    bool aborted = false;  // non-finite loss; params untouched
};

// Full PPO update over collected trajectories: GAE per trajectory, advantage
// normalization over the batch, epochs x shuffled minibatches, Adam on both
// nets, parameters re-quantized to f32 after the update. A non-finite loss
// aborts the update and restores the previous parameters.
PpoStats ppo_update(ActorCritic& ac, AdamPair& opt, std::span<const Trajectory> trajectories,
                    const PpoConfig& cfg, std::mt19937_64& rng);

}  // namespace ranloop::drl
