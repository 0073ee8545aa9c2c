#include "ranloop/ran/traffic.hpp"

namespace ranloop::ran {

TrafficSource::TrafficSource(TrafficModel model) : model_(model) {}

std::vector<uint32_t> TrafficSource::arrivals(double dt, std::mt19937_64& rng) {
    std::vector<uint32_t> pkts;
    if (dt <= 0) return pkts;
    switch (model_.kind) {
        case TrafficModel::Kind::CBR: {
            cbr_accum_bytes_ += model_.cbr.rate_bps * dt / 8.0;
            while (cbr_accum_bytes_ >= kCbrPacketBytes) {
                pkts.push_back(kCbrPacketBytes);
                cbr_accum_bytes_ -= kCbrPacketBytes;
            }
            break;
        }
        case TrafficModel::Kind::Poisson: {
            std::poisson_distribution<int> dist(model_.poisson.pkts_per_s * dt);
            int n = dist(rng);
            pkts.assign(static_cast<size_t>(n), model_.poisson.pkt_size_bytes);
            break;
        }
    }
    return pkts;
}

}  // namespace ranloop::ran
