#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "flee/neural/params.hpp"

namespace flee::nn {

inline constexpr std::uint32_t kCheckpointVersion = 1;

// Layout (all integers u32 little-endian, all reals f64 little-endian):
//   "FLEE" | version | n_message_layers | message dims (n+1) | readout in,out |
//   head in,out | scaler dim | mask bits | parameters (tensors() order) |
//   scaler mean | scaler std | CRC-32 of everything before it
std::vector<std::uint8_t> serialize_checkpoint(const ModelParams& params);

/// Throws CorruptChecksum, VersionMismatch (bad magic, version, or dims other
/// than `expected` when given).
ModelParams deserialize_checkpoint(const std::vector<std::uint8_t>& bytes,
                                   const std::optional<ModelDims>& expected = std::nullopt);

void save_checkpoint(const ModelParams& params, const std::filesystem::path& path);
/// Throws Io, CorruptChecksum, VersionMismatch.
ModelParams load_checkpoint(const std::filesystem::path& path, const std::optional<ModelDims>& expected = std::nullopt);

/// Human-readable dump for debugging.
std::string checkpoint_to_json(const ModelParams& params);

/// CRC-32 of the serialized checkpoint.
std::uint32_t parameter_digest(const ModelParams& params);

}  // namespace flee::nn
