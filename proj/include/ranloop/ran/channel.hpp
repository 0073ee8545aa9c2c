#pragma once

#include <random>

#include "ranloop/ran/types.hpp"

namespace ranloop::ran {

// Log-distance path loss: ref_loss + 10 * n * log10(max(d, 1 m)).
double pathloss_db(double distance_m, const ChannelParams& p);

// One mobility + channel step of dt seconds: random-waypoint motion inside
// the disc around ue.home, AR(1) shadowing with rho = exp(-speed*dt/corr),
// then SINR = tx - PL(d) - shadowing - noise and CQI refresh.
void step_mobility_channel(UeState& ue, const Vec2& bs_position, double dt,
                           const ChannelParams& p, std::mt19937_64& rng);

// Places the UE uniformly in the mobility disc, draws speed, waypoint and
// initial shadowing, and computes the initial SINR/CQI.
void init_ue_channel(UeState& ue, const Vec2& bs_position, const ChannelParams& p,
                     std::mt19937_64& rng);

// Serve one TTI from an allocation: per-UE capacity is
// granted * bytes_per_prb(cqi); served = min(capacity, buffer). Buffers,
// window counters and cumulative totals are updated. Returns bytes served
// per scheduled UE (same keys as alloc).
std::map<uint32_t, uint32_t> serve_tti(const PrbAllocation& alloc,
                                       const std::map<uint32_t, UeState*>& ues_by_id);

}  // namespace ranloop::ran
