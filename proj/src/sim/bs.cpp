#include "ranloop/sim/bs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ranloop/common/rng.hpp"

namespace ranloop::sim {

void QuotaSchedule::validate(uint16_t n_prbs) const {
    uint64_t prev = 0;
    for (size_t i = 0; i < entries.size(); ++i) {
        if (i > 0 && entries[i].t_start_ms < prev)
            throw ran::ConfigError("quota schedule entries must be time-sorted");
        prev = entries[i].t_start_ms;
        uint32_t sum = 0;
        for (const auto& [slice, quota] : entries[i].quotas) sum += quota;
        if (sum > n_prbs)
            throw ran::ConfigError("quota schedule entry at " +
                                   std::to_string(entries[i].t_start_ms) +
                                   " ms exceeds the PRB grid");
    }
}

BaseStation::BaseStation(const BsConfig& cfg, uint64_t seed) : cfg_(cfg) {
    cfg_.schedule.validate(cfg_.n_prbs);

    uint32_t quota_sum = 0;
    for (const auto& spec : cfg_.slices) {
        if (spec.ue_ids.empty()) throw ran::ConfigError("slice without UEs");
        quota_sum += spec.prb_quota;
    }
    if (quota_sum > cfg_.n_prbs) throw ran::ConfigError("slice quotas exceed the PRB grid");

    for (const auto& spec : cfg_.slices) {
        SliceRuntime rt;
        rt.spec = spec;
        std::sort(rt.spec.ue_ids.begin(), rt.spec.ue_ids.end());
        rt.rr_next_ue = rt.spec.ue_ids.front();
        slices_.push_back(std::move(rt));

        for (uint32_t ue_id : spec.ue_ids) {
            if (ue_index_.count(ue_id))
                throw ran::ConfigError("UE " + std::to_string(ue_id) +
                                       " assigned to more than one slice");
            ran::UeState ue;
            ue.ue_id = ue_id;
            ue.slice_id = spec.slice_id;
            ue.ewma_thr_bps = ran::kEwmaFloorBps;
            ues_.push_back(ue);
            ue_index_[ue_id] = nullptr;  // fixed up below
            traffic_[ue_id] = ran::TrafficSource(spec.traffic);
            traffic_rng_[ue_id] = make_rng(seed, RngStream::Traffic, ue_id);
            channel_rng_[ue_id] = make_rng(seed, RngStream::Channel, ue_id);
        }
    }
    for (auto& ue : ues_) ue_index_[ue.ue_id] = &ue;

    // Home point of the mobility disc; the trainer offsets it from the BS.
    for (auto& ue : ues_) {
        auto& rng = channel_rng_[ue.ue_id];
        ue.home = cfg_.position;
        if (cfg_.ue_home_offset_m > 0) {
            std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
            double phi = angle(rng);
            ue.home.x += cfg_.ue_home_offset_m * std::cos(phi);
            ue.home.y += cfg_.ue_home_offset_m * std::sin(phi);
        }
        ran::init_ue_channel(ue, cfg_.position, cfg_.channel, rng);
    }
}

ran::SchedulingPolicy BaseStation::slice_policy(uint32_t slice_id) const {
    for (const auto& sl : slices_)
        if (sl.spec.slice_id == slice_id) return sl.spec.policy;
    throw std::out_of_range("unknown slice");
}

uint16_t BaseStation::slice_quota(uint32_t slice_id) const {
    for (const auto& sl : slices_)
        if (sl.spec.slice_id == slice_id) return sl.spec.prb_quota;
    throw std::out_of_range("unknown slice");
}

void BaseStation::apply_schedule_boundary() {
    const auto& entries = cfg_.schedule.entries;
    while (next_schedule_entry_ < entries.size() &&
           entries[next_schedule_entry_].t_start_ms <= clock_ms_) {
        const auto& entry = entries[next_schedule_entry_];
        for (auto& sl : slices_) {
            auto it = entry.quotas.find(sl.spec.slice_id);
            if (it != entry.quotas.end()) sl.spec.prb_quota = it->second;
        }
        ++next_schedule_entry_;
    }
}

bool BaseStation::apply_control(uint32_t slice_id, ran::SchedulingPolicy policy) {
    for (auto& sl : slices_) {
        if (sl.spec.slice_id == slice_id) {
            sl.spec.policy = policy;
            return true;
        }
    }
    return false;
}

void BaseStation::schedule_and_serve(SliceRuntime& sl) {
    uint16_t quota = sl.spec.prb_quota;
    if (quota == 0) return;

    std::vector<uint32_t> backlogged;
    std::vector<ran::SchedUe> sched_inputs;
    for (uint32_t ue_id : sl.spec.ue_ids) {
        ran::UeState& ue = *ue_index_[ue_id];
        if (ue.dl_buffer_bytes == 0 || ue.cqi == 0) continue;
        backlogged.push_back(ue_id);
        uint32_t bpp = ran::bytes_per_prb(ue.cqi);
        uint32_t req = static_cast<uint32_t>(
            std::min<uint64_t>((ue.dl_buffer_bytes + bpp - 1) / bpp, quota));
        sl.requested[ue_id] += req;
        ran::SchedUe in;
        in.ue_id = ue_id;
        in.inst_rate_bps = static_cast<double>(bpp) * 8.0 * 1000.0;
        in.history_bps = ue.ewma_thr_bps;
        in.efficiency = ran::cqi_to_efficiency(ue.cqi);
        sched_inputs.push_back(in);
    }

    ran::PrbAllocation alloc;
    if (!backlogged.empty()) {
        switch (sl.spec.policy) {
            case ran::SchedulingPolicy::RR: {
                auto res = ran::schedule_rr(backlogged, quota, sl.rr_next_ue);
                sl.rr_next_ue = res.next_ue;
                alloc = std::move(res.alloc);
                break;
            }
            case ran::SchedulingPolicy::PF:
                alloc = ran::schedule_pf(sched_inputs, quota);
                break;
            case ran::SchedulingPolicy::WF:
                alloc = ran::schedule_wf(sched_inputs, quota);
                break;
        }
    }

    uint32_t granted_sum = 0;
    for (const auto& [ue_id, prbs] : alloc) granted_sum += prbs;
    if (granted_sum > quota) throw std::logic_error("scheduler exceeded the slice quota");

    auto served = ran::serve_tti(alloc, ue_index_);
    for (const auto& [ue_id, prbs] : alloc) sl.granted[ue_id] += prbs;

    // PF history: every UE of the slice, zero rate when unscheduled.
    for (uint32_t ue_id : sl.spec.ue_ids) {
        ran::UeState& ue = *ue_index_[ue_id];
        auto it = served.find(ue_id);
        double rate = it == served.end() ? 0.0 : static_cast<double>(it->second) * 8.0 * 1000.0;
        ue.ewma_thr_bps = ran::update_ewma(ue.ewma_thr_bps, rate);
    }
}

void BaseStation::run_tti() {
    apply_schedule_boundary();

    for (auto& ue : ues_) {
        auto pkts = traffic_[ue.ue_id].arrivals(kTtiMs / 1000.0, traffic_rng_[ue.ue_id]);
        for (uint32_t p : pkts) {
            ue.dl_buffer_bytes += p;
            ue.arrived_bytes_total += p;
        }
    }

    if (clock_ms_ != 0 && clock_ms_ % kChannelStepMs == 0) {
        for (auto& ue : ues_) {
            ran::step_mobility_channel(ue, cfg_.position, kChannelStepMs / 1000.0, cfg_.channel,
                                       channel_rng_[ue.ue_id]);
        }
    }

    for (auto& sl : slices_) schedule_and_serve(sl);

    clock_ms_ += kTtiMs;
}

std::vector<KpiReport> BaseStation::close_windows() {
    std::vector<KpiReport> reports;
    reports.reserve(slices_.size());
    for (auto& sl : slices_) {
        KpiReport rep;
        rep.bs_id = cfg_.bs_id;
        rep.slice_id = sl.spec.slice_id;
        rep.window_start_ms = clock_ms_ - kKpiWindowMs;
        rep.window_len_ms = kKpiWindowMs;
        rep.policy = sl.spec.policy;
        rep.slice_prbs = sl.spec.prb_quota;
        for (uint32_t ue_id : sl.spec.ue_ids) {
            ran::UeState& ue = *ue_index_[ue_id];
            e2::UeRecord r;
            r.ue_id = ue_id;
            r.dl_buffer_bytes =
                static_cast<uint32_t>(std::min<uint64_t>(ue.dl_buffer_bytes, 0xFFFFFFFFull));
            r.tx_bytes = static_cast<uint32_t>(ue.served_bytes_window);
            r.tx_pkts = ue.tx_pkts_window;
            r.dl_thr_bps = static_cast<uint32_t>(ue.served_bytes_window * 8 * 1000 /
                                                 kKpiWindowMs);
            r.ul_thr_bps = 0;  // uplink is reported but not scheduled
            r.sinr_cdb = static_cast<int16_t>(std::clamp(
                std::lround(ue.sinr_db * 100.0), -32768L, 32767L));
            r.granted_prbs =
                static_cast<uint16_t>(std::min<uint32_t>(sl.granted[ue_id], 0xFFFF));
            r.requested_prbs =
                static_cast<uint16_t>(std::min<uint32_t>(sl.requested[ue_id], 0xFFFF));
            r.bler_permille = 0;  // no per-packet error model
            r.dl_cqi = ue.cqi;
            r.dl_mcs = static_cast<uint8_t>(std::clamp(2 * static_cast<int>(ue.cqi) - 2, 0, 28));
            rep.records.push_back(r);

            ue.served_bytes_window = 0;
            ue.tx_pkts_window = 0;
        }
        sl.granted.clear();
        sl.requested.clear();
        reports.push_back(std::move(rep));
    }
    return reports;
}

uint64_t BaseStation::total_arrived() const {
    uint64_t sum = 0;
    for (const auto& ue : ues_) sum += ue.arrived_bytes_total;
    return sum;
}

uint64_t BaseStation::total_served() const {
    uint64_t sum = 0;
    for (const auto& ue : ues_) sum += ue.served_bytes_total;
    return sum;
}

uint64_t BaseStation::total_buffered() const {
    uint64_t sum = 0;
    for (const auto& ue : ues_) sum += ue.dl_buffer_bytes;
    return sum;
}

}  // namespace ranloop::sim
