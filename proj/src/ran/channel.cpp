#include "ranloop/ran/channel.hpp"

#include <algorithm>
#include <cmath>

#include "ranloop/ran/link.hpp"

namespace ranloop::ran {

double pathloss_db(double distance_m, const ChannelParams& p) {
    return p.ref_loss_db + 10.0 * p.pathloss_exponent * std::log10(std::max(distance_m, 1.0));
}

static Vec2 random_point_in_disc(const Vec2& center, double radius, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double r = radius * std::sqrt(unit(rng));
    double phi = 2.0 * M_PI * unit(rng);
    return {center.x + r * std::cos(phi), center.y + r * std::sin(phi)};
}

static void refresh_link(UeState& ue, const Vec2& bs_position, const ChannelParams& p) {
    double d = distance(ue.position, bs_position);
    ue.sinr_db = p.tx_power_dbm - pathloss_db(d, p) - ue.shadowing_db - p.noise_dbm;
    ue.cqi = cqi_from_sinr(ue.sinr_db);
}

void init_ue_channel(UeState& ue, const Vec2& bs_position, const ChannelParams& p,
                     std::mt19937_64& rng) {
    std::uniform_real_distribution<double> speed(p.speed_min_mps, p.speed_max_mps);
    ue.position = random_point_in_disc(ue.home, p.mobility_disc_radius_m, rng);
    ue.waypoint = random_point_in_disc(ue.home, p.mobility_disc_radius_m, rng);
    ue.speed_mps = speed(rng);
    ue.heading_rad = std::atan2(ue.waypoint.y - ue.position.y, ue.waypoint.x - ue.position.x);
    if (p.shadowing_sigma_db > 0) {
        std::normal_distribution<double> sh(0.0, p.shadowing_sigma_db);
        ue.shadowing_db = sh(rng);
    } else {
        ue.shadowing_db = 0.0;
    }
    ue.ewma_thr_bps = std::max(ue.ewma_thr_bps, kEwmaFloorBps);
    refresh_link(ue, bs_position, p);
}

void step_mobility_channel(UeState& ue, const Vec2& bs_position, double dt,
                           const ChannelParams& p, std::mt19937_64& rng) {
    // Random-waypoint motion: walk toward the target, redraw on arrival.
    double step = ue.speed_mps * dt;
    double remaining = distance(ue.position, ue.waypoint);
    if (remaining <= step || remaining <= 1e-9) {
        ue.position = ue.waypoint;
        ue.waypoint = random_point_in_disc(ue.home, p.mobility_disc_radius_m, rng);
        std::uniform_real_distribution<double> speed(p.speed_min_mps, p.speed_max_mps);
        ue.speed_mps = speed(rng);
    } else {
        ue.position.x += step * (ue.waypoint.x - ue.position.x) / remaining;
        ue.position.y += step * (ue.waypoint.y - ue.position.y) / remaining;
    }
    ue.heading_rad = std::atan2(ue.waypoint.y - ue.position.y, ue.waypoint.x - ue.position.x);

    // AR(1) shadowing, correlation set by the distance moved this step.
    if (p.shadowing_sigma_db > 0 && p.shadowing_corr_distance_m > 0) {
        double rho = std::exp(-ue.speed_mps * dt / p.shadowing_corr_distance_m);
        std::normal_distribution<double> noise(0.0, p.shadowing_sigma_db);
        ue.shadowing_db = rho * ue.shadowing_db + std::sqrt(1.0 - rho * rho) * noise(rng);
    }

    refresh_link(ue, bs_position, p);
}

std::map<uint32_t, uint32_t> serve_tti(const PrbAllocation& alloc,
                                       const std::map<uint32_t, UeState*>& ues_by_id) {
    std::map<uint32_t, uint32_t> served;
    for (const auto& [ue_id, prbs] : alloc) {
        UeState& ue = *ues_by_id.at(ue_id);
        uint64_t capacity = static_cast<uint64_t>(prbs) * bytes_per_prb(ue.cqi);
        uint32_t bytes = static_cast<uint32_t>(std::min<uint64_t>(capacity, ue.dl_buffer_bytes));
        ue.dl_buffer_bytes -= bytes;
        ue.served_bytes_window += bytes;
        ue.served_bytes_total += bytes;
        if (bytes > 0) ue.tx_pkts_window += 1;  // transport-block count
        served[ue_id] = bytes;
    }
    return served;
}

}  // namespace ranloop::ran
