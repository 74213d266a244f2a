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

#ifndef RRA_CONFIG_H_
#define RRA_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "rra/cells.h"
#include "rra/optim.h"

namespace rra {

enum class Task { kAdding, kMnist, kMnistPermuted, kText, kLongrange };

std::string_view to_string(Task task);
Task parse_task(std::string_view name);

struct TrainConfig {
  Task task = Task::kAdding;
  CellKind cell = CellKind::kRra;
  bool bidirectional = false;

  std::size_t seq_length = 100;  // S for adding, T for longrange
  std::size_t hidden = 128;
  std::size_t embedding = 128;
  std::size_t window = 10;       // K
  std::size_t batch = 50;
  std::size_t eval_batch = 500;

  std::optional<OptimizerKind> optimizer;  // unset: per-task default
  double rho = 0.95;
  double epsilon = 1e-6;
  double decay = 0.9;
  double learning_rate = 1e-4;
  double clip = 1.0;
  double dropout = 0.5;

  std::uint64_t seed = 0;
  std::size_t iterations = 1000;
  std::size_t eval_interval = 100;
  std::size_t checkpoint_interval = 0;  // 0: final checkpoint only
  bool record_wallclock = false;

  std::size_t train_size = 10000;
  std::size_t test_size = 2000;

  // longrange
  std::size_t gap = 60;
  std::size_t vocab = 50;  // longrange vocabulary; text: max vocabulary

  // mnist
  std::filesystem::path mnist_train_images;
  std::filesystem::path mnist_train_labels;
  std::filesystem::path mnist_test_images;
  std::filesystem::path mnist_test_labels;
  std::size_t downsample = 1;
  std::uint64_t permutation_seed = 0;

  // text
  std::filesystem::path text_train;
  std::filesystem::path text_test;
  std::size_t max_length = 400;

  std::filesystem::path out_dir = "runs/default";
  std::filesystem::path resume;

  OptimizerKind optimizer_kind() const;
  OptimizerConfig optimizer_config() const;
  void validate() const;
};

// Applies one `key = value` setting. Unknown keys and malformed values
// throw ArgumentError.
void set_config_value(TrainConfig& config, std::string_view key,
                      std::string_view value);

// Flat key-value file: one `key = value` per line, `#` starts a comment.
TrainConfig load_config_file(const std::filesystem::path& path,
                             TrainConfig base = {});
TrainConfig parse_config_text(std::string_view text, TrainConfig base = {});

std::map<std::string, std::string> config_to_map(const TrainConfig& config);

}  // namespace rra

#endif  // RRA_CONFIG_H_
