#pragma once

#include <filesystem>
#include <string>

#include "simplexflow/velocity_field.hpp"

namespace simplexflow {

inline constexpr std::uint32_t kCheckpointVersion = 1;

// Binary checkpoint, all integers and floats little-endian:
//   char[8]  magic "SXFFIELD"
//   u32      format version
//   u32      D, embed_dim, activation tag, hidden layer count H
//   u32[H]   hidden widths
//   u32      metadata byte length M, then M bytes of UTF-8 JSON
//   u64      parameter count P, then P f64 in VelocityField::parameters() order
struct Checkpoint {
  VelocityField field;
  std::string metadata;
};

void save_checkpoint(const std::filesystem::path& path, const VelocityField& field,
                     const std::string& metadata = "{}");
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace simplexflow
