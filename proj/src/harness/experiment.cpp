#include "ranloop/harness/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <limits>
#include <numeric>

#include <nlohmann/json.hpp>

#include "ranloop/harness/dataset.hpp"
#include "ranloop/ric/ric.hpp"

namespace ranloop::harness {

using nlohmann::json;

RicSocketSource::RicSocketSource(std::string host, uint16_t port, std::function<void()> pump)
    : host_(std::move(host)), port_(port), pump_(std::move(pump)) {}

std::vector<e2::Bytes> RicSocketSource::collect(uint32_t bs_id, size_t expected,
                                                int timeout_ms) {
    auto& conn = conns_.at(bs_id);
    std::vector<e2::Frame> frames;
    if (pump_) {
        // Cooperative mode: after the pump returns the RIC is idle, so
        // whatever is readable now is everything that is coming.
        pump_();
        if (!conn.poll_frames(frames)) throw e2::TransportError("RIC closed the connection");
    } else {
        auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms);
        while (frames.size() < expected && std::chrono::steady_clock::now() < deadline) {
            auto got = conn.wait_frames(5);
            for (auto& f : got) frames.push_back(std::move(f));
        }
        if (expected == 0) {
            // opportunistic drain: anything already queued
            conn.poll_frames(frames);
        }
    }
    std::vector<e2::Bytes> out;
    out.reserve(frames.size());
    for (const auto& f : frames) out.push_back(e2::encode_frame(f.msg_type, f.payload));
    return out;
}

std::vector<e2::Bytes> RicSocketSource::attach(uint32_t bs_id,
                                               const std::vector<e2::Bytes>& frames) {
    auto [it, inserted] = conns_.emplace(bs_id, e2::Connection::connect_to(host_, port_));
    for (const auto& f : frames) it->second.send_frame(f);
    return collect(bs_id, frames.size(), 5000);
}

std::vector<e2::Bytes> RicSocketSource::window_close(uint32_t bs_id,
                                                     const std::vector<e2::Bytes>& frames) {
    auto& conn = conns_.at(bs_id);
    for (const auto& f : frames) conn.send_frame(f);
    // Controls are delta-only, so the expected count is unknown; in threaded
    // mode take what arrives promptly and let stragglers apply next window.
    return collect(bs_id, 0, 2);
}

void RicSocketSource::deliver_acks(uint32_t bs_id, const std::vector<e2::Bytes>& frames) {
    auto& conn = conns_.at(bs_id);
    for (const auto& f : frames) conn.send_frame(f);
    if (pump_) pump_();
}

ExperimentSummary summarize(const ScenarioConfig& scenario, const ControlMode& mode,
                            uint64_t seed, const sim::RunTrace& trace, double wall_seconds) {
    ExperimentSummary s;
    s.mode = mode.name();
    s.seed = seed;
    s.duration_ms = scenario.duration_ms;
    s.n_prbs = scenario.n_prbs();
    s.wall_seconds = wall_seconds;
    s.windows = trace.reports.size();
    s.controls_applied = 0;
    for (const auto& c : trace.controls)
        if (c.accepted) ++s.controls_applied;

    for (size_t i = 0; i < scenario.slices.size(); ++i) {
        SliceSeries series;
        series.slice_type = scenario.slices[i].slice_type;
        s.slices[static_cast<uint32_t>(i)] = std::move(series);
    }

    for (const auto& rep : trace.reports) {
        auto& series = s.slices.at(rep.slice_id);
        if (rep.slice_prbs > 0)
            series.spectral_efficiency.push_back(spectral_efficiency(rep));
        double buffer = 0.0;
        for (const auto& r : rep.records) buffer += r.dl_buffer_bytes;
        series.buffer_bytes.push_back(buffer);
        series.rewards.push_back(report_reward(series.slice_type, rep));
        auto key = std::make_tuple(static_cast<uint8_t>(series.slice_type), rep.slice_prbs,
                                   static_cast<uint8_t>(rep.policy));
        ++s.action_counts[key];
    }
    return s;
}

ExperimentResult run_experiment(const ScenarioConfig& scenario, const RunOptions& opts) {
    ScenarioConfig cfg = scenario;
    if (opts.mode) cfg.control = *opts.mode;
    uint64_t seed = opts.seed.value_or(cfg.seed);
    cfg.seed = seed;
    cfg.validate();

    if (opts.write_files) std::filesystem::create_directories(opts.out_dir);

    auto world_cfg = build_world(cfg);
    std::vector<sim::BaseStation> world;
    world.reserve(world_cfg.size());
    for (const auto& bc : world_cfg) world.emplace_back(bc, seed);

    auto t0 = std::chrono::steady_clock::now();
    sim::RunTrace trace;

    if (cfg.control.kind == ControlMode::Kind::Static) {
        sim::ControlSource null_source;
        trace = sim::run(world, cfg.duration_ms, null_source);
    } else {
        if (cfg.control.catalog_dir.empty())
            throw ran::ConfigError("drl mode requires a catalog directory");
        std::filesystem::path catalog(cfg.control.catalog_dir);

        ric::Ric::Options ric_opts;
        ric_opts.port = 0;
        if (opts.write_files) ric_opts.status_path = (opts.out_dir / "ric_status.json").string();
        ric::Ric ric(ric_opts);
        for (ran::SliceType type :
             {ran::SliceType::EMBB, ran::SliceType::URLLC, ran::SliceType::MTC}) {
            // Startup fails here, before any simulation, if an entry is
            // missing or corrupt.
            auto entry = ric::load_model_from_catalog(catalog, ran::to_string(type));
            ric::XAppDescriptor desc;
            desc.xapp_id = std::string("drl-") + ran::to_string(type);
            desc.slice_type = type;
            desc.model_ref = entry.entry_id;
            ric.register_xapp(desc, std::move(entry));
        }

        if (opts.deterministic) {
            RicSocketSource source("127.0.0.1", ric.port(), [&ric] { ric.pump(); });
            trace = sim::run(world, cfg.duration_ms, source);
        } else {
            ric.start();
            trace = sim::run_threaded(world, cfg.duration_ms, [&](uint32_t) {
                return std::make_unique<RicSocketSource>("127.0.0.1", ric.port());
            });
            ric.stop();
        }
    }

    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    ExperimentResult result;
    result.trace = std::move(trace);
    result.summary = summarize(cfg, cfg.control, seed, result.trace, wall);

    if (opts.write_files) {
        std::map<uint32_t, ran::SliceType> slice_types;
        for (size_t i = 0; i < cfg.slices.size(); ++i)
            slice_types[static_cast<uint32_t>(i)] = cfg.slices[i].slice_type;
        result.dataset_path = opts.out_dir / "dataset.csv";
        write_dataset(result.dataset_path, result.trace, slice_types);
        result.summary_path = opts.out_dir / "summary.json";
        save_summary(result.summary, result.summary_path);
    }
    return result;
}

namespace {

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double mean(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

CompareReport compare_policies(const ScenarioConfig& scenario, const CompareOptions& opts) {
    if (opts.modes.size() < 2)
        throw ran::ConfigError("compare needs at least two modes");
    if (opts.seeds.empty()) throw ran::ConfigError("compare needs at least one seed");

    std::filesystem::create_directories(opts.out_dir);

    CompareReport report;
    // pooled samples per (mode index, slice)
    std::vector<std::map<uint32_t, SliceSeries>> pooled(opts.modes.size());

    auto sanitize = [](std::string s) {
        std::replace(s.begin(), s.end(), ':', '_');
        return s;
    };

    for (size_t m = 0; m < opts.modes.size(); ++m) {
        for (uint64_t seed : opts.seeds) {
            RunOptions ro;
            ro.mode = opts.modes[m];
            ro.seed = seed;
            ro.out_dir = opts.out_dir / sanitize(opts.modes[m].name()) /
                         ("seed" + std::to_string(seed));
            ro.deterministic = true;
            auto result = run_experiment(scenario, ro);
            for (auto& [slice_id, series] : result.summary.slices) {
                auto& agg = pooled[m][slice_id];
                agg.slice_type = series.slice_type;
                agg.spectral_efficiency.insert(agg.spectral_efficiency.end(),
                                               series.spectral_efficiency.begin(),
                                               series.spectral_efficiency.end());
                agg.buffer_bytes.insert(agg.buffer_bytes.end(), series.buffer_bytes.begin(),
                                        series.buffer_bytes.end());
            }
        }
    }

    for (size_t m = 0; m < opts.modes.size(); ++m) {
        ModeAggregate agg;
        agg.mode = opts.modes[m].name();
        for (const auto& [slice_id, series] : pooled[m]) {
            agg.median_se[slice_id] = median(series.spectral_efficiency);
            agg.mean_se[slice_id] = mean(series.spectral_efficiency);
            agg.mean_buffer[slice_id] = mean(series.buffer_bytes);

            std::string base = agg.mode + "_" + ran::to_string(series.slice_type) +
                               std::to_string(slice_id);
            base = sanitize(base);
            if (!series.spectral_efficiency.empty()) {
                std::ofstream out(opts.out_dir / ("cdf_" + base + "_se.csv"));
                out << "value,cum_fraction\n";
                for (auto [v, f] : compute_cdf(series.spectral_efficiency))
                    out << v << ',' << f << '\n';
            }
            if (!series.buffer_bytes.empty()) {
                std::ofstream out(opts.out_dir / ("cdf_" + base + "_buffer.csv"));
                out << "value,cum_fraction\n";
                for (auto [v, f] : compute_cdf(series.buffer_bytes)) out << v << ',' << f << '\n';
            }
        }
        report.modes.push_back(std::move(agg));
    }

    // Deltas of the drl mode against the best static mode per slice.
    std::optional<size_t> drl_idx;
    for (size_t m = 0; m < opts.modes.size(); ++m)
        if (opts.modes[m].kind == ControlMode::Kind::Drl) drl_idx = m;
    if (drl_idx) {
        for (const auto& [slice_id, drl_series] : pooled[*drl_idx]) {
            double best_se = 0.0;
            double best_buffer = std::numeric_limits<double>::infinity();
            for (size_t m = 0; m < opts.modes.size(); ++m) {
                if (opts.modes[m].kind != ControlMode::Kind::Static) continue;
                best_se = std::max(best_se, report.modes[m].median_se.at(slice_id));
                best_buffer = std::min(best_buffer, report.modes[m].mean_buffer.at(slice_id));
            }
            double drl_se = report.modes[*drl_idx].median_se.at(slice_id);
            double drl_buffer = report.modes[*drl_idx].mean_buffer.at(slice_id);
            if (best_se > 0)
                report.se_delta_vs_best_static[slice_id] = (drl_se - best_se) / best_se;
            if (best_buffer > 0 && std::isfinite(best_buffer))
                report.buffer_delta_vs_best_static[slice_id] =
                    (drl_buffer - best_buffer) / best_buffer;
        }
    }

    json jmodes = json::array();
    for (const auto& m : report.modes) {
        json med = json::object(), mse = json::object(), mbuf = json::object();
        for (const auto& [k, v] : m.median_se) med[std::to_string(k)] = v;
        for (const auto& [k, v] : m.mean_se) mse[std::to_string(k)] = v;
        for (const auto& [k, v] : m.mean_buffer) mbuf[std::to_string(k)] = v;
        jmodes.push_back({{"mode", m.mode},
                          {"median_se", med},
                          {"mean_se", mse},
                          {"mean_buffer_bytes", mbuf}});
    }
    json jdelta_se = json::object(), jdelta_buf = json::object();
    for (const auto& [k, v] : report.se_delta_vs_best_static) jdelta_se[std::to_string(k)] = v;
    for (const auto& [k, v] : report.buffer_delta_vs_best_static)
        jdelta_buf[std::to_string(k)] = v;
    json j = {{"modes", jmodes},
              {"seeds", opts.seeds},
              {"se_delta_vs_best_static", jdelta_se},
              {"buffer_delta_vs_best_static", jdelta_buf}};
    std::ofstream out(opts.out_dir / "comparison.json");
    out << j.dump(2) << '\n';

    return report;
}

}  // namespace ranloop::harness
