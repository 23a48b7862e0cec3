#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sr {

// Binary container for named f32 tensors plus a step counter and a JSON
// config echo. Layout (little-endian):
//   magic "SRCK" | u32 version=1 | u32 entry count
//   per entry: u32 name length | name bytes | u8 dtype (1 = f32) |
//              u8 ndim | ndim x u64 dims | payload
//   u64 step counter | u32 config length | config JSON bytes
struct CheckpointEntry {
  std::string name;
  std::vector<uint64_t> dims;
  std::vector<float> data;
};

struct Checkpoint {
  uint32_t version = 1;
  std::vector<CheckpointEntry> entries;
  uint64_t step = 0;
  std::string config_json;

  const CheckpointEntry* find(const std::string& name) const {
    for (const auto& e : entries)
      if (e.name == name) return &e;
    return nullptr;
  }
};

void save_checkpoint(const std::string& path, const Checkpoint& ck);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace sr
