#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace ranloop::ran {

// Fixed wire codes, shared with the e2lite control payload.
enum class SchedulingPolicy : uint8_t { RR = 0, WF = 1, PF = 2 };

enum class SliceType : uint8_t { EMBB = 0, URLLC = 1, MTC = 2 };

const char* to_string(SchedulingPolicy p);
const char* to_string(SliceType t);
SchedulingPolicy policy_from_string(const std::string& s);
SliceType slice_type_from_string(const std::string& s);

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

double distance(const Vec2& a, const Vec2& b);

struct ChannelParams {
    double pathloss_exponent = 3.5;
    double ref_loss_db = 30.0;   // at 1 m
    double tx_power_dbm = 43.0;
    double noise_dbm = -101.0;   // thermal + NF over the 3 MHz carrier
    double shadowing_sigma_db = 4.0;
    double shadowing_corr_distance_m = 25.0;
    double mobility_disc_radius_m = 200.0;  // random-waypoint disc around the home point
    double speed_min_mps = 0.5;
    double speed_max_mps = 2.0;
};

struct CbrTraffic {
    double rate_bps = 0.0;
};

struct PoissonTraffic {
    double pkts_per_s = 0.0;
    uint32_t pkt_size_bytes = 0;
};

struct TrafficModel {
    enum class Kind { CBR, Poisson } kind = Kind::CBR;
    CbrTraffic cbr;
    PoissonTraffic poisson;

    static TrafficModel make_cbr(double rate_bps);
    static TrafficModel make_poisson(double pkts_per_s, uint32_t pkt_size_bytes);
};

struct UeState {
    uint32_t ue_id = 0;
    uint32_t slice_id = 0;
    Vec2 position;
    Vec2 waypoint;               // random-waypoint target
    Vec2 home;                   // center of the mobility disc (serving BS by default)
    double speed_mps = 0.0;
    double heading_rad = 0.0;
    double shadowing_db = 0.0;   // Gauss-Markov state
    double sinr_db = 0.0;
    uint8_t cqi = 0;             // 0..15, 0 = outage
    uint64_t dl_buffer_bytes = 0;
    double ewma_thr_bps = 0.0;   // PF history, floored at kEwmaFloorBps
    uint64_t served_bytes_window = 0;
    uint32_t tx_pkts_window = 0;
    // cumulative counters for byte-conservation checks
    uint64_t arrived_bytes_total = 0;
    uint64_t served_bytes_total = 0;
};

struct SliceConfig {
    uint32_t slice_id = 0;
    SliceType slice_type = SliceType::EMBB;
    std::vector<uint32_t> ue_ids;  // ascending, the canonical RR order
    uint16_t prb_quota = 0;
    SchedulingPolicy policy = SchedulingPolicy::RR;
};

// PRB grants for one TTI within one slice.
using PrbAllocation = std::map<uint32_t, uint16_t>;

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace ranloop::ran
