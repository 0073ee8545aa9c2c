#include "ranloop/harness/report.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace ranloop::harness {

using nlohmann::json;

double spectral_efficiency(const sim::KpiReport& report) {
    double thr = 0.0;
    for (const auto& r : report.records) thr += r.dl_thr_bps;
    return thr / (static_cast<double>(report.slice_prbs) * kPrbBandwidthHz);
}

std::vector<std::pair<double, double>> compute_cdf(std::vector<double> samples) {
    if (samples.empty()) throw std::invalid_argument("compute_cdf: no samples");
    std::sort(samples.begin(), samples.end());
    std::vector<std::pair<double, double>> cdf;
    size_t n = samples.size();
    for (size_t i = 0; i < n; ++i) {
        // keep the last occurrence of each distinct value
        if (i + 1 < n && samples[i + 1] == samples[i]) continue;
        cdf.emplace_back(samples[i], static_cast<double>(i + 1) / static_cast<double>(n));
    }
    return cdf;
}

void save_summary(const ExperimentSummary& s, const std::filesystem::path& path) {
    json slices = json::object();
    for (const auto& [slice_id, series] : s.slices) {
        slices[std::to_string(slice_id)] = {
            {"slice_type", ran::to_string(series.slice_type)},
            {"spectral_efficiency", series.spectral_efficiency},
            {"buffer_bytes", series.buffer_bytes},
            {"rewards", series.rewards},
        };
    }
    json actions = json::array();
    for (const auto& [key, count] : s.action_counts) {
        actions.push_back({{"slice_type", std::get<0>(key)},
                           {"slice_prbs", std::get<1>(key)},
                           {"policy", std::get<2>(key)},
                           {"windows", count}});
    }
    json j = {
        {"mode", s.mode},
        {"seed", s.seed},
        {"duration_ms", s.duration_ms},
        {"n_prbs", s.n_prbs},
        {"windows", s.windows},
        {"controls_applied", s.controls_applied},
        {"wall_seconds", s.wall_seconds},
        {"slices", slices},
        {"action_counts", actions},
    };
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write summary: " + path.string());
    out << j.dump(2) << '\n';
}

ExperimentSummary load_summary(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read summary: " + path.string());
    json j;
    in >> j;
    ExperimentSummary s;
    s.mode = j.at("mode").get<std::string>();
    s.seed = j.at("seed").get<uint64_t>();
    s.duration_ms = j.at("duration_ms").get<uint64_t>();
    s.n_prbs = j.at("n_prbs").get<uint16_t>();
    s.windows = j.at("windows").get<uint64_t>();
    s.controls_applied = j.at("controls_applied").get<uint64_t>();
    s.wall_seconds = j.at("wall_seconds").get<double>();
    for (const auto& [key, val] : j.at("slices").items()) {
        SliceSeries series;
        series.slice_type = ran::slice_type_from_string(val.at("slice_type").get<std::string>());
        series.spectral_efficiency = val.at("spectral_efficiency").get<std::vector<double>>();
        series.buffer_bytes = val.at("buffer_bytes").get<std::vector<double>>();
        series.rewards = val.at("rewards").get<std::vector<double>>();
        s.slices[static_cast<uint32_t>(std::stoul(key))] = std::move(series);
    }
    for (const auto& a : j.at("action_counts")) {
        auto key = std::make_tuple(a.at("slice_type").get<uint8_t>(),
                                   a.at("slice_prbs").get<uint16_t>(),
                                   a.at("policy").get<uint8_t>());
        s.action_counts[key] = a.at("windows").get<uint64_t>();
    }
    return s;
}

std::vector<ActionCell> action_distribution(const ExperimentSummary& s) {
    std::map<std::pair<uint8_t, uint16_t>, ActionCell> cells;
    for (const auto& [key, count] : s.action_counts) {
        auto& cell = cells[{std::get<0>(key), std::get<1>(key)}];
        cell.slice_type = static_cast<ran::SliceType>(std::get<0>(key));
        cell.slice_prbs = std::get<1>(key);
        cell.fractions[std::get<2>(key)] += static_cast<double>(count);
        cell.windows += count;
    }
    std::vector<ActionCell> out;
    for (auto& [key, cell] : cells) {
        if (cell.windows == 0) continue;
        for (double& f : cell.fractions) f /= static_cast<double>(cell.windows);
        out.push_back(cell);
    }
    return out;
}

std::vector<std::filesystem::path> write_report_files(const ExperimentSummary& s,
                                                      const std::filesystem::path& out_dir) {
    std::vector<std::filesystem::path> written;
    std::filesystem::create_directories(out_dir);

    for (const auto& [slice_id, series] : s.slices) {
        const std::string base =
            std::string(ran::to_string(series.slice_type)) + std::to_string(slice_id);
        if (!series.spectral_efficiency.empty()) {
            auto path = out_dir / ("cdf_" + base + "_se.csv");
            std::ofstream out(path);
            out << "value,cum_fraction\n";
            for (auto [v, f] : compute_cdf(series.spectral_efficiency))
                out << v << ',' << f << '\n';
            written.push_back(path);
        }
        if (!series.buffer_bytes.empty()) {
            auto path = out_dir / ("cdf_" + base + "_buffer.csv");
            std::ofstream out(path);
            out << "value,cum_fraction\n";
            for (auto [v, f] : compute_cdf(series.buffer_bytes)) out << v << ',' << f << '\n';
            written.push_back(path);
        }
    }

    auto table = action_distribution(s);
    auto path = out_dir / "action_distribution.csv";
    std::ofstream out(path);
    out << "slice_type,slice_prbs,frac_rr,frac_wf,frac_pf,windows\n";
    for (const auto& cell : table) {
        out << ran::to_string(cell.slice_type) << ',' << cell.slice_prbs << ','
            << cell.fractions[0] << ',' << cell.fractions[1] << ',' << cell.fractions[2] << ','
            << cell.windows << '\n';
    }
    written.push_back(path);
    return written;
}

}  // namespace ranloop::harness
