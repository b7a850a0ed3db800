#pragma once

#include "tccm/data.hpp"
#include "tccm/model.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace tccm {

struct Provenance {
    std::uint64_t seed = 0;
    int epochs = 0;
    std::string dataset;
    std::string config_hash;  // FNV-1a of the canonical training configuration
    std::string loss = "l2";
    double contamination = 0.0;
    bool normalize = true;
    bool noise_injection = false;
    bool time_interpolation = false;

    bool operator==(const Provenance&) const = default;
};

struct Checkpoint {
    static constexpr int kSchemaVersion = 1;

    ModelParams params;
    Scaler scaler;
    double t_fixed = 1.0;
    Provenance provenance;

    bool operator==(const Checkpoint&) const;
};

// JSON text with sorted keys and shortest round-trip decimals, so that
// parse -> serialize reproduces the input byte for byte.
std::string serialize_checkpoint(const Checkpoint& ckpt);
// Throws DataFormatError on malformed text, unknown schema or inconsistent shapes.
Checkpoint parse_checkpoint(std::string_view text);

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

// 64-bit FNV-1a, as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view text);

}  // namespace tccm
