#include "ranloop/harness/scenario.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "ranloop/ran/link.hpp"

namespace ranloop::harness {

using nlohmann::json;

std::string ControlMode::name() const {
    if (kind == Kind::Static) return std::string("static:") + ran::to_string(static_policy);
    return "drl";
}

ControlMode parse_mode(const std::string& mode) {
    ControlMode m;
    if (mode.rfind("static:", 0) == 0) {
        m.kind = ControlMode::Kind::Static;
        m.static_policy = ran::policy_from_string(mode.substr(7));
        return m;
    }
    if (mode.rfind("drl:", 0) == 0) {
        m.kind = ControlMode::Kind::Drl;
        m.catalog_dir = mode.substr(4);
        if (m.catalog_dir.empty()) throw ran::ConfigError("drl mode needs a catalog directory");
        return m;
    }
    if (mode == "drl") {
        m.kind = ControlMode::Kind::Drl;
        return m;  // catalog dir from the scenario file
    }
    throw ran::ConfigError("unknown control mode: " + mode);
}

uint16_t ScenarioConfig::n_prbs() const { return ran::prb_count(bandwidth_hz); }

void ScenarioConfig::validate() const {
    if (bs_positions.empty()) throw ran::ConfigError("scenario has no BSs");
    if (slices.empty()) throw ran::ConfigError("scenario has no slices");
    uint32_t quota_sum = 0;
    for (const auto& s : slices) {
        if (s.n_ues == 0) throw ran::ConfigError("slice UE count must be positive");
        quota_sum += s.initial_quota;
    }
    uint16_t grid = n_prbs();
    if (quota_sum > grid) throw ran::ConfigError("initial quotas exceed the PRB grid");
    schedule.validate(grid);
    if (duration_ms == 0) throw ran::ConfigError("duration must be positive");
}

namespace {

ran::TrafficModel parse_traffic(const json& j) {
    std::string type = j.at("type").get<std::string>();
    if (type == "cbr") return ran::TrafficModel::make_cbr(j.at("rate_bps").get<double>());
    if (type == "poisson")
        return ran::TrafficModel::make_poisson(j.at("pkts_per_s").get<double>(),
                                               j.at("pkt_size_bytes").get<uint32_t>());
    throw ran::ConfigError("unknown traffic type: " + type);
}

void parse_channel(const json& j, ran::ChannelParams& p) {
    if (j.contains("pathloss_exponent")) p.pathloss_exponent = j["pathloss_exponent"];
    if (j.contains("ref_loss_db")) p.ref_loss_db = j["ref_loss_db"];
    if (j.contains("tx_power_dbm")) p.tx_power_dbm = j["tx_power_dbm"];
    if (j.contains("noise_dbm")) p.noise_dbm = j["noise_dbm"];
    if (j.contains("shadowing_sigma_db")) p.shadowing_sigma_db = j["shadowing_sigma_db"];
    if (j.contains("shadowing_corr_distance_m"))
        p.shadowing_corr_distance_m = j["shadowing_corr_distance_m"];
    if (j.contains("mobility_disc_radius_m"))
        p.mobility_disc_radius_m = j["mobility_disc_radius_m"];
    if (j.contains("speed_min_mps")) p.speed_min_mps = j["speed_min_mps"];
    if (j.contains("speed_max_mps")) p.speed_max_mps = j["speed_max_mps"];
}

}  // namespace

ScenarioConfig load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ran::ConfigError("cannot open scenario: " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ran::ConfigError("malformed scenario JSON: " + std::string(e.what()));
    }

    try {
        ScenarioConfig cfg;
        if (j.contains("seed")) cfg.seed = j["seed"].get<uint64_t>();
        cfg.duration_ms = j.at("duration_ms").get<uint64_t>();
        cfg.bandwidth_hz = j.at("bandwidth_hz").get<double>();
        for (const auto& bs : j.at("bss")) {
            const auto& pos = bs.at("position");
            cfg.bs_positions.push_back({pos.at(0).get<double>(), pos.at(1).get<double>()});
        }
        for (const auto& sl : j.at("slices")) {
            SliceScenario s;
            s.slice_type = ran::slice_type_from_string(sl.at("slice_type").get<std::string>());
            s.n_ues = sl.at("n_ues").get<uint16_t>();
            s.initial_quota = sl.at("quota").get<uint16_t>();
            s.traffic = parse_traffic(sl.at("traffic"));
            cfg.slices.push_back(s);
        }
        if (j.contains("quota_schedule")) {
            for (const auto& entry : j["quota_schedule"]) {
                sim::QuotaEntry qe;
                qe.t_start_ms = entry.at("t_ms").get<uint64_t>();
                const auto& quotas = entry.at("quotas");
                for (size_t i = 0; i < quotas.size(); ++i)
                    qe.quotas[static_cast<uint32_t>(i)] = quotas.at(i).get<uint16_t>();
                cfg.schedule.entries.push_back(std::move(qe));
            }
        }
        if (j.contains("channel")) parse_channel(j["channel"], cfg.channel);
        if (j.contains("control")) {
            cfg.control = parse_mode(j["control"].at("mode").get<std::string>());
            if (cfg.control.kind == ControlMode::Kind::Drl && j["control"].contains("catalog_dir"))
                cfg.control.catalog_dir = j["control"]["catalog_dir"].get<std::string>();
        }
        if (j.contains("training")) {
            const auto& t = j["training"];
            if (t.contains("home_offset_max_m"))
                cfg.training.home_offset_max_m = t["home_offset_max_m"];
            if (t.contains("speed_scale_max")) cfg.training.speed_scale_max = t["speed_scale_max"];
        }
        cfg.validate();
        return cfg;
    } catch (const json::exception& e) {
        throw ran::ConfigError("invalid scenario " + path.string() + ": " + e.what());
    }
}

std::vector<sim::BsConfig> build_world(const ScenarioConfig& cfg) {
    cfg.validate();
    std::vector<sim::BsConfig> world;
    uint32_t next_ue = 1;
    for (size_t b = 0; b < cfg.bs_positions.size(); ++b) {
        sim::BsConfig bs;
        bs.bs_id = static_cast<uint32_t>(b + 1);
        bs.position = cfg.bs_positions[b];
        bs.n_prbs = cfg.n_prbs();
        bs.channel = cfg.channel;
        bs.schedule = cfg.schedule;
        for (size_t s = 0; s < cfg.slices.size(); ++s) {
            const auto& tpl = cfg.slices[s];
            sim::SliceSpec spec;
            spec.slice_id = static_cast<uint32_t>(s);
            spec.slice_type = tpl.slice_type;
            spec.prb_quota = tpl.initial_quota;
            spec.traffic = tpl.traffic;
            spec.policy = cfg.control.kind == ControlMode::Kind::Static
                              ? cfg.control.static_policy
                              : ran::SchedulingPolicy::RR;
            for (uint16_t u = 0; u < tpl.n_ues; ++u) spec.ue_ids.push_back(next_ue++);
            bs.slices.push_back(std::move(spec));
        }
        world.push_back(std::move(bs));
    }
    return world;
}

}  // namespace ranloop::harness
