#pragma once

#include <filesystem>
#include <string>

#include "pcg/config.hpp"
#include "pcg/model.hpp"

namespace pcg::model {

inline constexpr std::uint32_t kCheckpointVersion = 1;

// Layout (little-endian):
//   "PCGM", u32 version,
//   u32 length + architecture descriptor text (key=value lines),
//   u32 tensor count, then per tensor:
//     u32 name length + name, u32 rank, rank x u32 dims, float32 data
//     (row-major over the logical dims).
std::string architecture_descriptor(const ModelConfig& cfg);
ModelConfig parse_architecture(const std::string& text);

void save_checkpoint(const std::filesystem::path& path, const Model& model);
Model load_checkpoint(const std::filesystem::path& path);

}  // namespace pcg::model
