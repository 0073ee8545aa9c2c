#include "ranloop/sim/runner.hpp"

#include <algorithm>
#include <memory>
#include <mutex>
#include <thread>

#include "ranloop/common/log.hpp"

namespace ranloop::sim {

namespace {

struct BsLink {
    std::map<uint32_t, uint32_t> sub_ids;  // slice_id -> subscription_id
    bool attached = false;
};

std::vector<e2::Bytes> build_attach_frames(const BaseStation& bs) {
    std::vector<e2::Bytes> frames;
    e2::SetupReqPayload setup;
    setup.bs_id = bs.bs_id();
    for (const auto& sl : bs.slices())
        setup.slices.push_back({static_cast<uint8_t>(sl.slice_id),
                                static_cast<uint8_t>(sl.slice_type)});
    frames.push_back(e2::frame_setup_req(setup));
    for (const auto& sl : bs.slices()) {
        e2::SubReqPayload sub;
        sub.bs_id = bs.bs_id();
        sub.slice_id = static_cast<uint8_t>(sl.slice_id);
        sub.report_period_ms = kKpiWindowMs;
        frames.push_back(e2::frame_sub_req(sub));
    }
    return frames;
}

BsLink parse_attach_response(const BaseStation& bs, const std::vector<e2::Bytes>& frames) {
    BsLink link;
    size_t expected = 1 + bs.slices().size();
    if (frames.size() != expected)
        throw std::runtime_error("control source returned " + std::to_string(frames.size()) +
                                 " attach frames, expected " + std::to_string(expected));
    size_t i = 0;
    for (const auto& raw : frames) {
        auto res = e2::decode_frame(raw);
        const auto& frame = std::get<e2::DecodedFrame>(res).frame;
        if (i == 0) {
            auto resp = e2::decode_setup_resp(frame.payload);
            if (resp.status != 0) throw std::runtime_error("E2 setup rejected");
        } else {
            auto resp = e2::decode_sub_resp(frame.payload);
            if (resp.status != 0) throw std::runtime_error("subscription rejected");
            link.sub_ids[bs.slices()[i - 1].slice_id] = resp.subscription_id;
        }
        ++i;
    }
    link.attached = true;
    return link;
}

std::vector<e2::Bytes> encode_reports(const BsLink& link, const std::vector<KpiReport>& reports) {
    std::vector<e2::Bytes> frames;
    frames.reserve(reports.size());
    for (const auto& rep : reports) {
        e2::IndicationPayload p;
        auto it = link.sub_ids.find(rep.slice_id);
        p.subscription_id = it == link.sub_ids.end() ? 0 : it->second;
        p.bs_id = rep.bs_id;
        p.slice_id = static_cast<uint8_t>(rep.slice_id);
        p.timestamp_ms = rep.window_start_ms;
        p.sched_policy = static_cast<uint8_t>(rep.policy);
        p.slice_prbs = rep.slice_prbs;
        p.records = rep.records;
        frames.push_back(e2::frame_indication(p));
    }
    return frames;
}

// Applies decoded control frames, returning acks; records outcomes in the
// trace.
std::vector<e2::Bytes> apply_controls(BaseStation& bs, const std::vector<e2::Bytes>& frames,
                                      RunTrace& trace, std::mutex* trace_mu) {
    std::vector<e2::Bytes> acks;
    for (const auto& raw : frames) {
        auto res = e2::decode_frame(raw);
        const auto& frame = std::get<e2::DecodedFrame>(res).frame;
        if (frame.msg_type != static_cast<uint8_t>(e2::MsgType::RicControl)) continue;
        auto ctrl = e2::decode_control(frame.payload);
        bool ok = bs.apply_control(ctrl.slice_id,
                                   static_cast<ran::SchedulingPolicy>(ctrl.sched_policy));
        {
            std::unique_lock<std::mutex> lock;
            if (trace_mu) lock = std::unique_lock<std::mutex>(*trace_mu);
            trace.controls.push_back({bs.clock_ms(), bs.bs_id(), ctrl.slice_id,
                                      static_cast<ran::SchedulingPolicy>(ctrl.sched_policy),
                                      ok});
        }
        e2::ControlAckPayload ack;
        ack.bs_id = bs.bs_id();
        ack.slice_id = ctrl.slice_id;
        ack.status = ok ? 0 : 1;
        ack.timestamp_ms = bs.clock_ms();
        acks.push_back(e2::frame_control_ack(ack));
    }
    return acks;
}

void run_one_bs(BaseStation& bs, uint64_t duration_ms, ControlSource& source, RunTrace& trace,
                std::mutex* trace_mu) {
    BsLink link;
    if (source.wants_reports()) {
        link = parse_attach_response(bs, source.attach(bs.bs_id(), build_attach_frames(bs)));
    }
    bool source_alive = true;
    for (uint64_t t = 0; t < duration_ms; t += kTtiMs) {
        bs.run_tti();
        if (!bs.window_due()) continue;
        auto reports = bs.close_windows();
        if (source.wants_reports() && source_alive) {
            try {
                auto controls = source.window_close(bs.bs_id(), encode_reports(link, reports));
                auto acks = apply_controls(bs, controls, trace, trace_mu);
                if (!acks.empty()) source.deliver_acks(bs.bs_id(), acks);
            } catch (const std::exception& e) {
                // Loop degrades, never halts: freeze the policy in force.
                std::unique_lock<std::mutex> lock;
                if (trace_mu) lock = std::unique_lock<std::mutex>(*trace_mu);
                trace.warnings.push_back("control source failed at " +
                                         std::to_string(bs.clock_ms()) + " ms: " + e.what());
                RANLOOP_LOG_WARN("control source failed for bs %u: %s", bs.bs_id(), e.what());
                source_alive = false;
            }
        }
        {
            std::unique_lock<std::mutex> lock;
            if (trace_mu) lock = std::unique_lock<std::mutex>(*trace_mu);
            for (auto& rep : reports) trace.reports.push_back(std::move(rep));
        }
    }
}

void sort_trace(RunTrace& trace) {
    std::stable_sort(trace.reports.begin(), trace.reports.end(),
                     [](const KpiReport& a, const KpiReport& b) {
                         if (a.window_start_ms != b.window_start_ms)
                             return a.window_start_ms < b.window_start_ms;
                         if (a.bs_id != b.bs_id) return a.bs_id < b.bs_id;
                         return a.slice_id < b.slice_id;
                     });
    std::stable_sort(trace.controls.begin(), trace.controls.end(),
                     [](const AppliedControl& a, const AppliedControl& b) {
                         if (a.t_ms != b.t_ms) return a.t_ms < b.t_ms;
                         if (a.bs_id != b.bs_id) return a.bs_id < b.bs_id;
                         return a.slice_id < b.slice_id;
                     });
}

}  // namespace

RunTrace run(std::vector<BaseStation>& world, uint64_t duration_ms, ControlSource& source) {
    RunTrace trace;

    std::vector<BsLink> links(world.size());
    if (source.wants_reports()) {
        for (size_t i = 0; i < world.size(); ++i) {
            links[i] = parse_attach_response(
                world[i], source.attach(world[i].bs_id(), build_attach_frames(world[i])));
        }
    }

    std::vector<bool> source_alive(world.size(), true);
    for (uint64_t t = 0; t < duration_ms; t += kTtiMs) {
        for (auto& bs : world) bs.run_tti();
        if ((t + kTtiMs) % kKpiWindowMs != 0) continue;
        for (size_t i = 0; i < world.size(); ++i) {
            BaseStation& bs = world[i];
            auto reports = bs.close_windows();
            if (source.wants_reports() && source_alive[i]) {
                try {
                    auto controls =
                        source.window_close(bs.bs_id(), encode_reports(links[i], reports));
                    auto acks = apply_controls(bs, controls, trace, nullptr);
                    if (!acks.empty()) source.deliver_acks(bs.bs_id(), acks);
                } catch (const std::exception& e) {
                    trace.warnings.push_back("control source failed at " +
                                             std::to_string(bs.clock_ms()) +
                                             " ms: " + e.what());
                    RANLOOP_LOG_WARN("control source failed for bs %u: %s", bs.bs_id(),
                                     e.what());
                    source_alive[i] = false;
                }
            }
            for (auto& rep : reports) trace.reports.push_back(std::move(rep));
        }
    }
    sort_trace(trace);
    return trace;
}

RunTrace run_threaded(std::vector<BaseStation>& world, uint64_t duration_ms,
                      const std::function<std::unique_ptr<ControlSource>(uint32_t)>& factory) {
    RunTrace trace;
    std::mutex trace_mu;
    std::vector<std::thread> workers;
    workers.reserve(world.size());
    for (auto& bs : world) {
        workers.emplace_back([&bs, duration_ms, &factory, &trace, &trace_mu] {
            auto source = factory(bs.bs_id());
            run_one_bs(bs, duration_ms, *source, trace, &trace_mu);
        });
    }
    for (auto& w : workers) w.join();
    sort_trace(trace);
    return trace;
}

}  // namespace ranloop::sim
