#pragma once

#include <cstdint>
#include <random>

// Seed-stream derivation. Every random concern (traffic per UE, channel per
// UE, agent sampling per slice instance, ...) owns an independent generator
// derived from the master seed, so paired-seed runs keep traffic and channel
// realizations identical while control decisions vary.

namespace ranloop {

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

enum class RngStream : uint64_t {
    Traffic = 1,
    Channel = 2,
    Mobility = 3,
    AgentSample = 4,
    PpoShuffle = 5,
    NetInit = 6,
    Scenario = 7,
};

// Deterministic per-(stream, entity) engine from the master seed.
inline std::mt19937_64 make_rng(uint64_t seed, RngStream stream, uint64_t entity = 0) {
    uint64_t s = splitmix64(seed ^ splitmix64(static_cast<uint64_t>(stream)));
    s = splitmix64(s ^ splitmix64(entity + 0x51ed2701ULL));
    return std::mt19937_64(s);
}

}  // namespace ranloop
