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

#ifndef RRA_TRAINER_H_
#define RRA_TRAINER_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "rra/adding.h"
#include "rra/checkpoint.h"
#include "rra/config.h"
#include "rra/mnist.h"
#include "rra/model.h"
#include "rra/text.h"

namespace rra {

// Indexable example collection that can assemble minibatches.
class Dataset {
 public:
  virtual ~Dataset() = default;
  virtual std::size_t size() const = 0;
  virtual Batch batch(std::span<const std::size_t> indices) const = 0;
};

class AddingDataset : public Dataset {
 public:
  explicit AddingDataset(std::vector<AddingExample> data)
      : data_(std::move(data)) {}
  std::size_t size() const override { return data_.size(); }
  Batch batch(std::span<const std::size_t> indices) const override {
    return make_adding_batch(data_, indices);
  }
  const std::vector<AddingExample>& examples() const { return data_; }

 private:
  std::vector<AddingExample> data_;
};

class PixelDataset : public Dataset {
 public:
  explicit PixelDataset(std::vector<PixelSequence> data)
      : data_(std::move(data)) {}
  std::size_t size() const override { return data_.size(); }
  Batch batch(std::span<const std::size_t> indices) const override {
    return make_pixel_batch(data_, indices);
  }
  const std::vector<PixelSequence>& examples() const { return data_; }

 private:
  std::vector<PixelSequence> data_;
};

class TokenDataset : public Dataset {
 public:
  explicit TokenDataset(std::vector<TokenSequence> data)
      : data_(std::move(data)) {}
  std::size_t size() const override { return data_.size(); }
  Batch batch(std::span<const std::size_t> indices) const override {
    return make_token_batch(data_, indices);
  }
  const std::vector<TokenSequence>& examples() const { return data_; }

 private:
  std::vector<TokenSequence> data_;
};

struct TaskData {
  std::unique_ptr<Dataset> train;
  std::unique_ptr<Dataset> eval;
  ModelConfig model;  // input/output sizes filled in from the task
};

// Generates or loads both splits. Generated data depends only on the seed,
// never on the cell kind, so paired LSTM/RRA runs see identical data.
TaskData load_task_data(const TrainConfig& config);

struct MetricsRow {
  std::uint64_t iteration = 0;
  std::uint64_t epoch = 0;
  double seconds = 0.0;
  double train_loss = 0.0;
  std::optional<double> eval_loss;
  std::optional<double> eval_metric;
  double grad_norm = 0.0;
  std::vector<double> attention;  // normalized forward-cell weights
};

std::string metrics_header(std::size_t window);
std::string format_metrics_row(const MetricsRow& row);

struct EvalMetrics {
  double loss = 0.0;
  double metric = 0.0;  // accuracy for classification, MSE for regression
  std::size_t count = 0;
};

// Eval-mode forward over the whole dataset in batches of `batch_size`.
EvalMetrics evaluate(const ModelParams& params, const ModelConfig& model,
                     const Dataset& data, std::size_t batch_size = 500);
EvalMetrics evaluate(const Checkpoint& ckpt, const Dataset& data,
                     std::size_t batch_size = 500);

struct TrainResult {
  MetricsRow last;
  EvalMetrics final_eval;
  std::filesystem::path checkpoint;
  std::filesystem::path metrics;
};

// Runs exactly config.iterations updates (no early stopping) and writes
// metrics.csv, timing.csv and checkpoint.bin to config.out_dir. One metrics
// row per iteration: the train loss, pre-clip gradient norm and attention
// weights describe the parameters the batch was run with; the eval columns,
// when present, describe the parameters after that iteration's update.
// Throws NumericError on a non-finite loss or degenerate attention; earlier
// interval checkpoints are left in place.
TrainResult run_training(const TrainConfig& config,
                         std::ostream* log = nullptr);

}  // namespace rra

#endif  // RRA_TRAINER_H_
