/* Copyright 2026 The ugformer Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef UGFORMER_CHECKPOINT_HPP_
#define UGFORMER_CHECKPOINT_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ugformer/parameter.hpp"

namespace ugformer {

// Binary layout, all integers and doubles little-endian:
//   "UGFCKPT\0" | u32 version | u32 count
//   count x { u32 name_len | name bytes | u32 rank | rank x u64 dim | f64 values }
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct CheckpointEntry {
  std::string name;
  Shape shape;
  std::vector<double> values;
};

void save_checkpoint(const ParameterStore& params, const std::filesystem::path& path);
std::vector<CheckpointEntry> read_checkpoint(const std::filesystem::path& path);

// Copies checkpoint values into `params`. Names, order and shapes must match
// exactly; any disagreement throws VersionError.
void load_checkpoint(ParameterStore& params, const std::filesystem::path& path);

}  // namespace ugformer

#endif  // UGFORMER_CHECKPOINT_HPP_
