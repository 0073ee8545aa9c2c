#pragma once

#include <filesystem>
#include <string>

#include "ranloop/drl/encoder.hpp"
#include "ranloop/drl/ppo.hpp"
#include "ranloop/ran/types.hpp"

// Model catalog format: one JSON document per entry with explicit layer
// shapes, base64-encoded little-endian float32 weight blobs and an FNV-1a64
// checksum over all decoded weight bytes (policy net first, then value net,
// layers in order, weights before biases). load(save(x)) == x exactly.

namespace ranloop::drl {

struct CatalogMeta {
    uint64_t seed = 0;
    int episodes = 0;
    std::string dataset_hash;
};

struct CatalogEntry {
    std::string entry_id;
    ran::SliceType slice_type = ran::SliceType::EMBB;
    EncoderConfig encoder;
    ActorCritic nets;
    CatalogMeta meta;
};

class CatalogError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Checksum string "fnv1a64:<16 hex digits>" over the f32 weight bytes.
std::string entry_checksum(const CatalogEntry& entry);

void save_model(const CatalogEntry& entry, const std::filesystem::path& path);

// Verifies shapes (24 -> 5x30 -> 3 / 1) and checksum; throws CatalogError on
// any mismatch.
CatalogEntry load_model(const std::filesystem::path& path);

}  // namespace ranloop::drl
