#include "ranloop/drl/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ranloop::drl {

void PpoConfig::validate() const {
    if (!(clip_eps > 0.0)) throw std::invalid_argument("clip_eps must be in (0,1)");
    if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must be in (0,1]");
    if (!(gae_lambda > 0.0 && gae_lambda <= 1.0))
        throw std::invalid_argument("gae_lambda must be in (0,1]");
    if (epochs <= 0 || minibatch <= 0 || horizon <= 0)
        throw std::invalid_argument("epochs, minibatch and horizon must be positive");
    if (!(learning_rate > 0.0)) throw std::invalid_argument("learning_rate must be positive");
}

GaeResult gae_advantages(const Trajectory& traj, double gamma, double lambda) {
    GaeResult res;
    size_t n = traj.size();
    res.advantages.resize(n);
    res.returns.resize(n);
    double next_adv = 0.0;
    double next_value = 0.0;  // V(s_{T+1}) = 0 at the horizon cut
    for (size_t i = n; i-- > 0;) {
        const Step& s = traj[i];
        double not_done = s.done ? 0.0 : 1.0;
        double delta = s.reward + gamma * next_value * not_done - s.value;
        next_adv = delta + gamma * lambda * next_adv * not_done;
        res.advantages[i] = next_adv;
        res.returns[i] = next_adv + s.value;
        next_value = s.value;
    }
    return res;
}

ActorCritic ActorCritic::make(uint64_t seed) {
    ActorCritic ac;
    MlpShape policy_shape{kStateDim, kHiddenWidth, kHiddenDepth, kNumActions};
    MlpShape value_shape{kStateDim, kHiddenWidth, kHiddenDepth, 1};
    ac.policy = Mlp::init(policy_shape, 1.0, 0.01, seed);
    ac.value = Mlp::init(value_shape, 1.0, 1.0, seed + 1);
    return ac;
}

std::array<double, kNumActions> ActorCritic::policy_probs(std::span<const double> state) const {
    MlpWorkspace ws;
    policy.forward(state, ws);
    return softmax(ws.out);
}

double ActorCritic::state_value(std::span<const double> state) const {
    MlpWorkspace ws;
    value.forward(state, ws);
    return ws.out[0];
}

namespace {

struct SampleLoss {
    double policy = 0.0;
    double value = 0.0;
    double entropy = 0.0;
    // gradient of the per-sample loss wrt logits / value output
    std::array<double, kNumActions> dlogits{};
    double dvalue = 0.0;
};

SampleLoss sample_loss(const ActorCritic& ac, const Step& s, double adv, double ret,
                       const PpoConfig& cfg, MlpWorkspace& pws, MlpWorkspace& vws,
                       bool want_grad) {
    SampleLoss out;

    ac.policy.forward(s.state, pws);
    auto probs = softmax(pws.out);
    size_t a = static_cast<size_t>(s.action);
    double logp = std::log(probs[a]);
    double ratio = std::exp(logp - s.log_prob);

    double unclipped = ratio * adv;
    double clipped = std::clamp(ratio, 1.0 - cfg.clip_eps, 1.0 + cfg.clip_eps) * adv;
    out.policy = -std::min(unclipped, clipped);
    out.entropy = entropy(probs);

    ac.value.forward(s.state, vws);
    double v = vws.out[0];
    double verr = v - ret;
    out.value = verr * verr;

    if (want_grad) {
        // d(-min)/dlogits: gradient flows through the unclipped branch only
        // when it attains the min (ties included).
        bool active = unclipped <= clipped;
        double coef = active ? -ratio * adv : 0.0;
        for (size_t k = 0; k < kNumActions; ++k) {
            double dlogp = (k == a ? 1.0 : 0.0) - probs[k];
            out.dlogits[k] = coef * dlogp;
            // entropy term: d(-c_H * H)/dz_k = c_H * p_k (log p_k + H)
            out.dlogits[k] += cfg.entropy_coef * probs[k] * (std::log(probs[k]) + out.entropy);
        }
        out.dvalue = cfg.value_coef * 2.0 * verr;
    }
    return out;
}

}  // namespace

double ppo_batch_loss(const ActorCritic& ac, const Batch& batch, std::span<const size_t> idx,
                      const PpoConfig& cfg) {
    MlpWorkspace pws, vws;
    double policy_loss = 0.0, value_loss = 0.0, ent = 0.0;
    for (size_t i : idx) {
        SampleLoss sl = sample_loss(ac, batch.steps[i], batch.advantages[i], batch.returns[i],
                                    cfg, pws, vws, false);
        policy_loss += sl.policy;
        value_loss += sl.value;
        ent += sl.entropy;
    }
    double n = static_cast<double>(idx.size());
    return policy_loss / n + cfg.value_coef * (value_loss / n) - cfg.entropy_coef * (ent / n);
}

double ppo_batch_grad(const ActorCritic& ac, const Batch& batch, std::span<const size_t> idx,
                      const PpoConfig& cfg, std::vector<double>& grad_policy,
                      std::vector<double>& grad_value, double* policy_loss, double* value_loss,
                      double* mean_entropy) {
    grad_policy.assign(ac.policy.params().size(), 0.0);
    grad_value.assign(ac.value.params().size(), 0.0);
    MlpWorkspace pws, vws;
    double ploss = 0.0, vloss = 0.0, ent = 0.0;
    double inv_n = 1.0 / static_cast<double>(idx.size());
    std::array<double, 1> dv{};
    for (size_t i : idx) {
        SampleLoss sl = sample_loss(ac, batch.steps[i], batch.advantages[i], batch.returns[i],
                                    cfg, pws, vws, true);
        ploss += sl.policy;
        vloss += sl.value;
        ent += sl.entropy;
        std::array<double, kNumActions> dlogits;
        for (size_t k = 0; k < kNumActions; ++k) dlogits[k] = sl.dlogits[k] * inv_n;
        ac.policy.backward(pws, dlogits, grad_policy);
        dv[0] = sl.dvalue * inv_n;
        ac.value.backward(vws, dv, grad_value);
    }
    if (policy_loss) *policy_loss = ploss * inv_n;
    if (value_loss) *value_loss = vloss * inv_n;
    if (mean_entropy) *mean_entropy = ent * inv_n;
    return ploss * inv_n + cfg.value_coef * (vloss * inv_n) - cfg.entropy_coef * (ent * inv_n);
}

void Adam::step(std::vector<double>& params, const std::vector<double>& grad, double lr) {
    constexpr double beta1 = 0.9;
    constexpr double beta2 = 0.999;
    constexpr double eps = 1e-8;
    ++t_;
    double bc1 = 1.0 - std::pow(beta1, static_cast<double>(t_));
    double bc2 = 1.0 - std::pow(beta2, static_cast<double>(t_));
    for (size_t i = 0; i < params.size(); ++i) {
        m_[i] = beta1 * m_[i] + (1.0 - beta1) * grad[i];
        v_[i] = beta2 * v_[i] + (1.0 - beta2) * grad[i] * grad[i];
        double mhat = m_[i] / bc1;
        double vhat = v_[i] / bc2;
        params[i] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
}

AdamPair AdamPair::make(const ActorCritic& ac) {
    AdamPair p;
    p.policy = Adam(ac.policy.params().size());
    p.value = Adam(ac.value.params().size());
    return p;
}

PpoStats ppo_update(ActorCritic& ac, AdamPair& opt, std::span<const Trajectory> trajectories,
                    const PpoConfig& cfg, std::mt19937_64& rng) {
    cfg.validate();
    PpoStats stats;

    Batch batch;
    for (const auto& traj : trajectories) {
        if (traj.empty()) continue;
        GaeResult gae = gae_advantages(traj, cfg.gamma, cfg.gae_lambda);
        for (size_t i = 0; i < traj.size(); ++i) {
            batch.steps.push_back(traj[i]);
            batch.advantages.push_back(gae.advantages[i]);
            batch.returns.push_back(gae.returns[i]);
            stats.mean_reward += traj[i].reward;
        }
    }
    if (batch.steps.empty()) throw std::invalid_argument("ppo_update: no steps collected");
    stats.mean_reward /= static_cast<double>(batch.steps.size());

    // Normalize advantages to zero mean, unit variance over the whole batch.
    double mean = std::accumulate(batch.advantages.begin(), batch.advantages.end(), 0.0) /
                  static_cast<double>(batch.advantages.size());
    double var = 0.0;
    for (double a : batch.advantages) var += (a - mean) * (a - mean);
    var /= static_cast<double>(batch.advantages.size());
    double inv_std = 1.0 / (std::sqrt(var) + 1e-8);
    for (double& a : batch.advantages) a = (a - mean) * inv_std;

    // Snapshot for rollback on a non-finite loss.
    std::vector<double> policy_backup = ac.policy.params();
    std::vector<double> value_backup = ac.value.params();
    Adam opt_backup_p = opt.policy;  // Adam state rolls back too
    Adam opt_backup_v = opt.value;

    std::vector<size_t> order(batch.steps.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> grad_policy, grad_value;

    int stat_batches = 0;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (size_t start = 0; start < order.size();
             start += static_cast<size_t>(cfg.minibatch)) {
            size_t end = std::min(order.size(), start + static_cast<size_t>(cfg.minibatch));
            std::span<const size_t> idx(order.data() + start, end - start);
            double ploss, vloss, ment;
            double total = ppo_batch_grad(ac, batch, idx, cfg, grad_policy, grad_value, &ploss,
                                          &vloss, &ment);
            if (!std::isfinite(total)) {
                ac.policy.params() = policy_backup;
                ac.value.params() = value_backup;
                opt.policy = opt_backup_p;
                opt.value = opt_backup_v;
                stats.aborted = true;
                return stats;
            }
            opt.policy.step(ac.policy.params(), grad_policy, cfg.learning_rate);
            opt.value.step(ac.value.params(), grad_value, cfg.learning_rate);
            stats.policy_loss += ploss;
            stats.value_loss += vloss;
            stats.entropy += ment;
            ++stat_batches;
        }
    }
    if (stat_batches > 0) {
        stats.policy_loss /= stat_batches;
        stats.value_loss /= stat_batches;
        stats.entropy /= stat_batches;
    }
    ac.policy.quantize_f32();
    ac.value.quantize_f32();
    return stats;
}

}  // namespace ranloop::drl
