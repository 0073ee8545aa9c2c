#include "ranloop/ran/types.hpp"

#include <cmath>

namespace ranloop::ran {

const char* to_string(SchedulingPolicy p) {
    switch (p) {
        case SchedulingPolicy::RR: return "rr";
        case SchedulingPolicy::WF: return "wf";
        case SchedulingPolicy::PF: return "pf";
    }
    return "?";
}

const char* to_string(SliceType t) {
    switch (t) {
        case SliceType::EMBB: return "embb";
        case SliceType::URLLC: return "urllc";
        case SliceType::MTC: return "mtc";
    }
    return "?";
}

SchedulingPolicy policy_from_string(const std::string& s) {
    if (s == "rr") return SchedulingPolicy::RR;
    if (s == "wf") return SchedulingPolicy::WF;
    if (s == "pf") return SchedulingPolicy::PF;
    throw ConfigError("unknown scheduling policy: " + s);
}

SliceType slice_type_from_string(const std::string& s) {
    if (s == "embb") return SliceType::EMBB;
    if (s == "urllc") return SliceType::URLLC;
    if (s == "mtc") return SliceType::MTC;
    throw ConfigError("unknown slice type: " + s);
}

double distance(const Vec2& a, const Vec2& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

TrafficModel TrafficModel::make_cbr(double rate_bps) {
    if (rate_bps <= 0) throw ConfigError("CBR rate must be positive");
    TrafficModel m;
    m.kind = Kind::CBR;
    m.cbr.rate_bps = rate_bps;
    return m;
}

TrafficModel TrafficModel::make_poisson(double pkts_per_s, uint32_t pkt_size_bytes) {
    if (pkts_per_s <= 0) throw ConfigError("Poisson rate must be positive");
    if (pkt_size_bytes == 0) throw ConfigError("Poisson packet size must be positive");
    TrafficModel m;
    m.kind = Kind::Poisson;
    m.poisson.pkts_per_s = pkts_per_s;
    m.poisson.pkt_size_bytes = pkt_size_bytes;
    return m;
}

}  // namespace ranloop::ran
