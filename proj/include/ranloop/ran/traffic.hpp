#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "ranloop/ran/types.hpp"

namespace ranloop::ran {

// Stateful downlink traffic source for one UE. CBR carries a fractional-byte
// accumulator so the emitted byte count never drifts from rate * t / 8 by
// more than one packet.
class TrafficSource {
  public:
    static constexpr uint32_t kCbrPacketBytes = 125;

    TrafficSource() = default;
    explicit TrafficSource(TrafficModel model);

    // Packet sizes (bytes) arriving during dt seconds.
    std::vector<uint32_t> arrivals(double dt, std::mt19937_64& rng);

    const TrafficModel& model() const { return model_; }

  private:
    TrafficModel model_;
    double cbr_accum_bytes_ = 0.0;
};

}  // namespace ranloop::ran
