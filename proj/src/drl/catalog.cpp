#include "ranloop/drl/catalog.hpp"

#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>

#include "ranloop/common/base64.hpp"
#include "ranloop/common/bytes.hpp"
#include "ranloop/common/fnv.hpp"

namespace ranloop::drl {

using nlohmann::json;

namespace {

// Little-endian f32 blob for one parameter slice.
std::vector<uint8_t> f32_bytes(const double* src, size_t n) {
    std::vector<uint8_t> out(n * 4);
    for (size_t i = 0; i < n; ++i) {
        float f = static_cast<float>(src[i]);
        uint32_t u;
        std::memcpy(&u, &f, 4);
        out[4 * i + 0] = static_cast<uint8_t>(u);
        out[4 * i + 1] = static_cast<uint8_t>(u >> 8);
        out[4 * i + 2] = static_cast<uint8_t>(u >> 16);
        out[4 * i + 3] = static_cast<uint8_t>(u >> 24);
    }
    return out;
}

void f32_read(const std::vector<uint8_t>& bytes, double* dst, size_t n) {
    if (bytes.size() != n * 4) throw CatalogError("weight blob size mismatch");
    for (size_t i = 0; i < n; ++i) {
        uint32_t u = static_cast<uint32_t>(bytes[4 * i]) |
                     (static_cast<uint32_t>(bytes[4 * i + 1]) << 8) |
                     (static_cast<uint32_t>(bytes[4 * i + 2]) << 16) |
                     (static_cast<uint32_t>(bytes[4 * i + 3]) << 24);
        float f;
        std::memcpy(&f, &u, 4);
        dst[i] = static_cast<double>(f);
    }
}

uint64_t net_checksum(const Mlp& net, uint64_t h) {
    const auto& shape = net.shape();
    for (size_t l = 0; l < shape.layers(); ++l) {
        auto wb = f32_bytes(net.params().data() + net.w_offset(l),
                            shape.layer_rows(l) * shape.layer_cols(l));
        h = fnv1a64(wb.data(), wb.size(), h);
        auto bb = f32_bytes(net.params().data() + net.b_offset(l), shape.layer_rows(l));
        h = fnv1a64(bb.data(), bb.size(), h);
    }
    return h;
}

json net_to_json(const Mlp& net) {
    const auto& shape = net.shape();
    json layers = json::array();
    for (size_t l = 0; l < shape.layers(); ++l) {
        size_t rows = shape.layer_rows(l);
        size_t cols = shape.layer_cols(l);
        layers.push_back({
            {"rows", rows},
            {"cols", cols},
            {"w", base64_encode(f32_bytes(net.params().data() + net.w_offset(l), rows * cols))},
            {"b", base64_encode(f32_bytes(net.params().data() + net.b_offset(l), rows))},
        });
    }
    return {{"in", shape.in},
            {"hidden", shape.hidden},
            {"depth", shape.depth},
            {"out", shape.out},
            {"layers", layers}};
}

Mlp net_from_json(const json& j, size_t expected_out) {
    MlpShape shape;
    shape.in = j.at("in").get<size_t>();
    shape.hidden = j.at("hidden").get<size_t>();
    shape.depth = j.at("depth").get<size_t>();
    shape.out = j.at("out").get<size_t>();
    MlpShape expected{kStateDim, kHiddenWidth, kHiddenDepth, expected_out};
    if (shape != expected) throw CatalogError("network shape mismatch");

    const auto& layers = j.at("layers");
    if (layers.size() != shape.layers()) throw CatalogError("layer count mismatch");
    Mlp net(shape);
    for (size_t l = 0; l < shape.layers(); ++l) {
        const auto& layer = layers.at(l);
        size_t rows = layer.at("rows").get<size_t>();
        size_t cols = layer.at("cols").get<size_t>();
        if (rows != shape.layer_rows(l) || cols != shape.layer_cols(l))
            throw CatalogError("layer shape mismatch");
        f32_read(base64_decode(layer.at("w").get<std::string>()),
                 net.params().data() + net.w_offset(l), rows * cols);
        f32_read(base64_decode(layer.at("b").get<std::string>()),
                 net.params().data() + net.b_offset(l), rows);
    }
    return net;
}

}  // namespace

std::string entry_checksum(const CatalogEntry& entry) {
    uint64_t h = net_checksum(entry.nets.policy, 0xcbf29ce484222325ULL);
    h = net_checksum(entry.nets.value, h);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void save_model(const CatalogEntry& entry, const std::filesystem::path& path) {
    json j = {
        {"entry_id", entry.entry_id},
        {"slice_type", ran::to_string(entry.slice_type)},
        {"encoder",
         {{"n_prbs", entry.encoder.n_prbs},
          {"max_rate_per_prb_bps", entry.encoder.max_rate_per_prb_bps},
          {"buffer_log_norm_bytes", entry.encoder.buffer_log_norm_bytes},
          {"ue_count_norm", entry.encoder.ue_count_norm}}},
        {"policy_net", net_to_json(entry.nets.policy)},
        {"value_net", net_to_json(entry.nets.value)},
        {"metadata",
         {{"seed", entry.meta.seed},
          {"episodes", entry.meta.episodes},
          {"dataset_hash", entry.meta.dataset_hash}}},
        {"checksum", entry_checksum(entry)},
    };
    std::ofstream out(path);
    if (!out) throw CatalogError("cannot write catalog entry: " + path.string());
    out << j.dump(2) << '\n';
}

CatalogEntry load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw CatalogError("cannot read catalog entry: " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw CatalogError("malformed catalog entry " + path.string() + ": " + e.what());
    }
    try {
        CatalogEntry entry;
        entry.entry_id = j.at("entry_id").get<std::string>();
        entry.slice_type = ran::slice_type_from_string(j.at("slice_type").get<std::string>());
        const auto& enc = j.at("encoder");
        entry.encoder.n_prbs = enc.at("n_prbs").get<uint16_t>();
        entry.encoder.max_rate_per_prb_bps = enc.at("max_rate_per_prb_bps").get<double>();
        entry.encoder.buffer_log_norm_bytes = enc.at("buffer_log_norm_bytes").get<double>();
        entry.encoder.ue_count_norm = enc.at("ue_count_norm").get<double>();
        entry.nets.policy = net_from_json(j.at("policy_net"), kNumActions);
        entry.nets.value = net_from_json(j.at("value_net"), 1);
        const auto& meta = j.at("metadata");
        entry.meta.seed = meta.at("seed").get<uint64_t>();
        entry.meta.episodes = meta.at("episodes").get<int>();
        entry.meta.dataset_hash = meta.at("dataset_hash").get<std::string>();

        std::string stored = j.at("checksum").get<std::string>();
        if (stored != entry_checksum(entry))
            throw CatalogError("checksum mismatch in " + path.string());
        return entry;
    } catch (const json::exception& e) {
        throw CatalogError("invalid catalog entry " + path.string() + ": " + e.what());
    }
}

}  // namespace ranloop::drl
