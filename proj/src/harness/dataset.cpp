#include "ranloop/harness/dataset.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "ranloop/drl/encoder.hpp"

namespace ranloop::harness {

double report_reward(ran::SliceType slice_type, const sim::KpiReport& report) {
    e2::IndicationPayload p;
    p.slice_prbs = report.slice_prbs;
    p.records = report.records;
    return drl::compute_reward(slice_type, p);
}

void write_dataset(const std::filesystem::path& path, const sim::RunTrace& trace,
                   const std::map<uint32_t, ran::SliceType>& slice_types) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write dataset: " + path.string());
    out << "timestamp_ms,bs_id,slice_id,slice_type,ue_id,dl_buffer_bytes,tx_bytes,tx_pkts,"
           "dl_thr_bps,dl_cqi,dl_mcs,sinr_db,granted_prbs,slice_prbs,sched_policy,reward\n";

    char buf[64];
    for (const auto& rep : trace.reports) {
        ran::SliceType type = slice_types.at(rep.slice_id);
        double reward = report_reward(type, rep);
        for (const auto& r : rep.records) {
            out << rep.window_start_ms << ',' << rep.bs_id << ',' << rep.slice_id << ','
                << ran::to_string(type) << ',' << r.ue_id << ',' << r.dl_buffer_bytes << ','
                << r.tx_bytes << ',' << r.tx_pkts << ',' << r.dl_thr_bps << ','
                << unsigned(r.dl_cqi) << ',' << unsigned(r.dl_mcs) << ',';
            std::snprintf(buf, sizeof(buf), "%.2f", r.sinr_cdb / 100.0);
            out << buf << ',' << r.granted_prbs << ',' << rep.slice_prbs << ','
                << ran::to_string(rep.policy) << ',';
            std::snprintf(buf, sizeof(buf), "%.6f", reward);
            out << buf << '\n';
        }
    }
}

}  // namespace ranloop::harness
