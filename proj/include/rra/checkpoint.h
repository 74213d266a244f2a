// Copyright 2026 The RRA Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RRA_CHECKPOINT_H_
#define RRA_CHECKPOINT_H_

#include <cstdint>
#include <filesystem>
#include <vector>

#include "rra/model.h"
#include "rra/optim.h"

namespace rra {

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  ModelConfig model;
  ModelParams params;
  OptimState optim;
  std::uint64_t iteration = 0;  // completed updates
};

// Container layout (little-endian):
//   "RRACKPT\0", u32 version, model config, u64 iteration, optimizer
//   config and step count, u32 block count, then per block
//   (name, u64 rows, u64 cols, rows*cols f64), and a trailing FNV-1a 64
//   checksum over everything before it.
std::vector<std::uint8_t> serialize_checkpoint(const Checkpoint& ckpt);
Checkpoint deserialize_checkpoint(const std::vector<std::uint8_t>& bytes);

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
// Throws FormatError (bad magic), VersionError or CorruptError.
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace rra

#endif  // RRA_CHECKPOINT_H_
