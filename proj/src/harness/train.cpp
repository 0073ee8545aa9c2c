#include "ranloop/harness/train.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "ranloop/common/fnv.hpp"
#include "ranloop/common/log.hpp"
#include "ranloop/common/rng.hpp"
#include "ranloop/drl/catalog.hpp"
#include "ranloop/drl/encoder.hpp"
#include "ranloop/ran/link.hpp"

namespace ranloop::harness {

using nlohmann::json;

drl::PpoConfig load_ppo_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ran::ConfigError("cannot open PPO config: " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ran::ConfigError("malformed PPO config: " + std::string(e.what()));
    }
    drl::PpoConfig cfg;
    if (j.contains("gamma")) cfg.gamma = j["gamma"];
    if (j.contains("gae_lambda")) cfg.gae_lambda = j["gae_lambda"];
    if (j.contains("clip_eps")) cfg.clip_eps = j["clip_eps"];
    if (j.contains("epochs")) cfg.epochs = j["epochs"];
    if (j.contains("minibatch")) cfg.minibatch = j["minibatch"];
    if (j.contains("learning_rate")) cfg.learning_rate = j["learning_rate"];
    if (j.contains("entropy_coef")) cfg.entropy_coef = j["entropy_coef"];
    if (j.contains("value_coef")) cfg.value_coef = j["value_coef"];
    if (j.contains("horizon")) cfg.horizon = j["horizon"];
    cfg.validate();
    return cfg;
}

TrainingControlSource::TrainingControlSource(std::map<uint32_t, ran::SliceType> slice_types,
                                             SharedNets nets, uint64_t episode_seed)
    : slice_types_(std::move(slice_types)), nets_(nets), episode_seed_(episode_seed) {}

std::vector<e2::Bytes> TrainingControlSource::attach(uint32_t bs_id,
                                                     const std::vector<e2::Bytes>& frames) {
    // Acts as the non-RT collection endpoint: accept the setup, grant every
    // subscription. Frames still round-trip through the codec.
    std::vector<e2::Bytes> out;
    for (const auto& raw : frames) {
        auto res = e2::decode_frame(raw);
        const auto& frame = std::get<e2::DecodedFrame>(res).frame;
        switch (static_cast<e2::MsgType>(frame.msg_type)) {
            case e2::MsgType::E2SetupReq: {
                auto req = e2::decode_setup_req(frame.payload);
                out.push_back(e2::frame_setup_resp({req.bs_id, 0}));
                break;
            }
            case e2::MsgType::RicSubReq: {
                e2::decode_sub_req(frame.payload);
                out.push_back(e2::frame_sub_resp({0, next_sub_id_++}));
                break;
            }
            default:
                break;
        }
    }
    (void)bs_id;
    return out;
}

std::vector<e2::Bytes> TrainingControlSource::window_close(
    uint32_t bs_id, const std::vector<e2::Bytes>& frames) {
    std::vector<e2::Bytes> controls;
    for (const auto& raw : frames) {
        auto res = e2::decode_frame(raw);
        const auto& frame = std::get<e2::DecodedFrame>(res).frame;
        if (frame.msg_type != static_cast<uint8_t>(e2::MsgType::RicIndication)) continue;
        auto report = e2::decode_indication(frame.payload);

        auto key = std::make_pair(report.bs_id, static_cast<uint32_t>(report.slice_id));
        auto [it, inserted] = instances_.try_emplace(key);
        Instance& inst = it->second;
        if (inserted) {
            inst.type = slice_types_.at(report.slice_id);
            inst.rng = make_rng(episode_seed_, RngStream::AgentSample,
                                (static_cast<uint64_t>(report.bs_id) << 16) | report.slice_id);
        }

        // The new window's report prices the previous action.
        if (inst.pending) {
            drl::Step step = *inst.pending;
            step.reward = drl::compute_reward(inst.type, report);
            inst.trajectory.push_back(step);
            inst.pending.reset();
        }

        inst.history.push_back(report);
        if (inst.history.size() > drl::kEncoderHistory)
            inst.history.erase(inst.history.begin());

        drl::ActorCritic* ac = nets_.by_type[static_cast<size_t>(inst.type)];
        auto state = drl::encode_state(nets_.encoder, inst.history, report.slice_prbs,
                                       nets_.encoder.n_prbs);
        auto probs = ac->policy_probs(state);
        auto sample = drl::sample_action(probs, inst.rng);

        drl::Step step;
        step.state = state;
        step.action = sample.action;
        step.log_prob = sample.log_prob;
        step.value = ac->state_value(state);
        inst.pending = step;

        if (sample.action != static_cast<int>(report.sched_policy)) {
            e2::ControlPayload ctrl;
            ctrl.bs_id = report.bs_id;
            ctrl.slice_id = report.slice_id;
            ctrl.sched_policy = static_cast<uint8_t>(sample.action);
            ctrl.timestamp_ms = report.timestamp_ms;
            controls.push_back(e2::frame_control(ctrl));
        }
    }
    (void)bs_id;
    return controls;
}

std::array<std::vector<drl::Trajectory>, 3> TrainingControlSource::finish() {
    std::array<std::vector<drl::Trajectory>, 3> out;
    for (auto& [key, inst] : instances_) {
        if (inst.trajectory.empty()) continue;
        inst.trajectory.back().done = true;
        out[static_cast<size_t>(inst.type)].push_back(std::move(inst.trajectory));
    }
    instances_.clear();
    return out;
}

namespace {

constexpr std::array<ran::SliceType, 3> kSliceTypes = {
    ran::SliceType::EMBB, ran::SliceType::URLLC, ran::SliceType::MTC};

drl::CatalogEntry make_entry(ran::SliceType type, const drl::ActorCritic& ac,
                             const drl::EncoderConfig& enc, uint64_t seed, int episodes,
                             const std::string& dataset_hash) {
    drl::CatalogEntry entry;
    entry.entry_id = ran::to_string(type);
    entry.slice_type = type;
    entry.encoder = enc;
    entry.nets = ac;
    entry.meta.seed = seed;
    entry.meta.episodes = episodes;
    entry.meta.dataset_hash = dataset_hash;
    return entry;
}

}  // namespace

TrainResult train_offline(const ScenarioConfig& scenario, const TrainOptions& opts) {
    if (opts.episodes <= 0) throw ran::ConfigError("train: nothing to train (0 episodes)");
    opts.ppo.validate();

    uint64_t seed = opts.seed.value_or(scenario.seed);
    uint64_t min_windows = static_cast<uint64_t>(opts.ppo.horizon) + 1;
    if (scenario.duration_ms / sim::kKpiWindowMs < min_windows)
        throw ran::ConfigError("train: scenario too short for horizon " +
                               std::to_string(opts.ppo.horizon) + " (needs >= " +
                               std::to_string(min_windows * sim::kKpiWindowMs) + " ms)");

    std::filesystem::create_directories(opts.out_dir);

    drl::EncoderConfig enc;
    enc.n_prbs = scenario.n_prbs();
    enc.max_rate_per_prb_bps = ran::max_rate_per_prb_bps();

    std::array<drl::ActorCritic, 3> nets;
    std::array<drl::AdamPair, 3> opt;
    std::array<std::mt19937_64, 3> shuffle_rng;
    std::array<int, 3> divergence_streak{};
    for (size_t t = 0; t < 3; ++t) {
        nets[t] = drl::ActorCritic::make(splitmix64(seed + t));
        opt[t] = drl::AdamPair::make(nets[t]);
        shuffle_rng[t] = make_rng(seed, RngStream::PpoShuffle, t);
    }

    std::string dataset_hash;
    {
        std::string key = std::to_string(seed) + ":" + std::to_string(scenario.duration_ms) +
                          ":" + std::to_string(opts.episodes);
        char buf[32];
        std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx",
                      static_cast<unsigned long long>(fnv1a64(
                          reinterpret_cast<const uint8_t*>(key.data()), key.size())));
        dataset_hash = buf;
    }

    std::map<uint32_t, ran::SliceType> slice_types;
    for (size_t i = 0; i < scenario.slices.size(); ++i)
        slice_types[static_cast<uint32_t>(i)] = scenario.slices[i].slice_type;

    TrainResult result;
    result.catalog_dir = opts.out_dir;
    std::mt19937_64 variation_rng = make_rng(seed, RngStream::Scenario);

    for (int ep = 0; ep < opts.episodes; ++ep) {
        ScenarioConfig episode = scenario;
        episode.control.kind = ControlMode::Kind::Static;  // agents drive via the source
        uint64_t ep_seed = splitmix64(seed ^ (0xE11D5EULL + static_cast<uint64_t>(ep)));

        // Per-episode network variation: BS-UE distance and mobility.
        double home_offset = 0.0;
        if (scenario.training.home_offset_max_m > 0) {
            std::uniform_real_distribution<double> d(0.0, scenario.training.home_offset_max_m);
            home_offset = d(variation_rng);
        }
        if (scenario.training.speed_scale_max > 1.0) {
            std::uniform_real_distribution<double> s(1.0, scenario.training.speed_scale_max);
            double scale = s(variation_rng);
            episode.channel.speed_min_mps *= scale;
            episode.channel.speed_max_mps *= scale;
        }

        auto world_cfg = build_world(episode);
        for (auto& bc : world_cfg) bc.ue_home_offset_m = home_offset;
        std::vector<sim::BaseStation> world;
        world.reserve(world_cfg.size());
        for (const auto& bc : world_cfg) world.emplace_back(bc, ep_seed);

        TrainingControlSource::SharedNets shared;
        shared.encoder = enc;
        for (size_t t = 0; t < 3; ++t) shared.by_type[t] = &nets[t];
        TrainingControlSource source(slice_types, shared, ep_seed);

        sim::run(world, episode.duration_ms, source);
        auto rollouts = source.finish();

        std::array<double, 3> episode_rewards{};
        bool halted = false;
        for (size_t t = 0; t < 3; ++t) {
            if (rollouts[t].empty()) continue;
            auto stats = drl::ppo_update(nets[t], opt[t], rollouts[t], opts.ppo, shuffle_rng[t]);
            episode_rewards[t] = stats.mean_reward;
            if (stats.aborted) {
                divergence_streak[t] += 1;
                RANLOOP_LOG_WARN("non-finite loss for %s at episode %d (streak %d)",
                                 ran::to_string(kSliceTypes[t]), ep, divergence_streak[t]);
                if (divergence_streak[t] >= 2) halted = true;
            } else {
                divergence_streak[t] = 0;
            }
        }
        result.reward_curve.push_back(episode_rewards);
        result.episodes_completed = ep + 1;

        if (halted) {
            // Divergence twice in a row: stop at the last good checkpoint.
            result.halted_on_divergence = true;
            break;
        }

        if (opts.checkpoint_every > 0 && (ep + 1) % opts.checkpoint_every == 0 &&
            ep + 1 < opts.episodes) {
            for (size_t t = 0; t < 3; ++t) {
                auto entry = make_entry(kSliceTypes[t], nets[t], enc, seed, ep + 1, dataset_hash);
                entry.entry_id = std::string(ran::to_string(kSliceTypes[t])) + ".ep" +
                                 std::to_string(ep + 1);
                drl::save_model(entry, opts.out_dir / (entry.entry_id + ".json"));
            }
        }
    }

    if (!result.halted_on_divergence) {
        for (size_t t = 0; t < 3; ++t) {
            auto entry = make_entry(kSliceTypes[t], nets[t], enc, seed,
                                    result.episodes_completed, dataset_hash);
            drl::save_model(entry, opts.out_dir / (entry.entry_id + ".json"));
        }
    }

    result.curve_path = opts.out_dir / "training_curve.csv";
    std::ofstream curve(result.curve_path);
    curve << "episode,reward_embb,reward_urllc,reward_mtc\n";
    for (size_t ep = 0; ep < result.reward_curve.size(); ++ep) {
        curve << ep << ',' << result.reward_curve[ep][0] << ',' << result.reward_curve[ep][1]
              << ',' << result.reward_curve[ep][2] << '\n';
    }
    return result;
}

}  // namespace ranloop::harness
