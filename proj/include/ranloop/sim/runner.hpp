#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "ranloop/sim/bs.hpp"

namespace ranloop::sim {

// Control plane attachment for a run. Sources that want KPI reports receive
// and return fully encoded e2lite frames, so the wire codec is always on the
// path even in-process. Static-policy runs use the default implementation
// and exchange nothing.
class ControlSource {
  public:
    virtual ~ControlSource() = default;

    virtual bool wants_reports() const { return false; }

    // Setup + subscription frames for one BS; returns the response frames
    // (SETUP_RESP then one SUB_RESP per slice, in order).
    virtual std::vector<e2::Bytes> attach(uint32_t /*bs_id*/,
                                          const std::vector<e2::Bytes>& /*frames*/) {
        return {};
    }

    // Indication frames for the window just closed; returns any RIC control
    // frames to apply at the next TTI boundary.
    virtual std::vector<e2::Bytes> window_close(uint32_t /*bs_id*/,
                                                const std::vector<e2::Bytes>& /*frames*/) {
        return {};
    }

    // Acks for the controls returned by window_close.
    virtual void deliver_acks(uint32_t /*bs_id*/, const std::vector<e2::Bytes>& /*frames*/) {}
};

struct AppliedControl {
    uint64_t t_ms = 0;
    uint32_t bs_id = 0;
    uint32_t slice_id = 0;
    ran::SchedulingPolicy policy = ran::SchedulingPolicy::RR;
    bool accepted = false;
};

struct RunTrace {
    std::vector<KpiReport> reports;
    std::vector<AppliedControl> controls;
    std::vector<std::string> warnings;
};

// Advances every BS TTI by TTI for duration_ms; at each 500 ms boundary the
// per-slice reports are closed, handed to the control source as indication
// frames and any returned controls are applied before the next TTI. A
// control-source failure freezes the current policies and the loop keeps
// running. Single-threaded and bit-reproducible per (config, seed).
RunTrace run(std::vector<BaseStation>& world, uint64_t duration_ms, ControlSource& source);

// Same loop with one worker thread per BS (reports still close on the shared
// 500 ms grid per BS clock). The factory provides one control source per BS
// so connections are single-owner.
RunTrace run_threaded(std::vector<BaseStation>& world, uint64_t duration_ms,
                      const std::function<std::unique_ptr<ControlSource>(uint32_t)>& factory);

}  // namespace ranloop::sim
