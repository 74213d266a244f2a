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

#ifndef RRA_MODEL_H_
#define RRA_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "rra/cells.h"
#include "rra/matrix.h"
#include "rra/rng.h"

namespace rra {

// One recurrent layer (LSTM or RRA, optionally bidirectional) between an
// optional token embedding and a dense readout.
struct ModelConfig {
  CellKind cell = CellKind::kRra;
  bool bidirectional = false;
  std::size_t input_size = 1;  // features per step for real-valued input
  std::size_t vocab = 0;       // > 0 switches to token input via embedding
  std::size_t embedding = 0;
  std::size_t hidden = 128;
  std::size_t window = 10;     // K; ignored by the LSTM
  std::size_t outputs = 1;     // 1 for regression, C for classification
  double dropout = 0.5;

  std::size_t cell_input() const { return vocab > 0 ? embedding : input_size; }
  std::size_t readout_width() const {
    return bidirectional ? 2 * hidden : hidden;
  }
  std::size_t cell_window() const {
    return cell == CellKind::kRra ? window : 0;
  }
  void validate() const;
};

struct ParamBlock {
  std::string name;
  Matrix* value;
};

struct ConstParamBlock {
  std::string name;
  const Matrix* value;
};

// Model parameters. Gradients use the same type.
struct ModelParams {
  Matrix embedding;         // V x E; empty for real-valued input
  CellParams forward_cell;
  CellParams backward_cell; // empty unless bidirectional
  Matrix readout_w;         // C x H, or C x 2H when bidirectional
  Matrix readout_b;         // C x 1

  bool bidirectional() const { return !backward_cell.w_gates.empty(); }

  // Non-empty blocks in a fixed order, named e.g. "fwd.w_a".
  std::vector<ParamBlock> blocks();
  std::vector<ConstParamBlock> blocks() const;

  static ModelParams zeros_like(const ModelParams& other);
};

ModelParams init_model(const ModelConfig& config, Rng& rng);

// A padded minibatch. Exactly one of `steps` / `tokens` is populated, and
// exactly one of `targets` / `labels`.
struct Batch {
  std::vector<Matrix> steps;              // T matrices, each D x B
  std::vector<std::vector<int>> tokens;   // B rows of T token ids
  // B x T validity bits, valid steps first. Empty means every step is valid.
  std::vector<std::vector<std::uint8_t>> mask;
  std::vector<double> targets;
  std::vector<int> labels;

  std::size_t size() const;
  std::size_t length() const;  // padded T
  bool classification() const { return !labels.empty(); }
  // Number of valid steps per sequence; validates the mask.
  std::vector<std::size_t> valid_lengths() const;
};

enum class Mode { kTrain, kEval };

struct DirectionTrace {
  std::vector<StepCache> steps;
};

struct ForwardTrace {
  std::vector<std::size_t> lengths;
  DirectionTrace forward;
  DirectionTrace backward;   // bidirectional only
  Matrix final_state;        // readout_width x B, before dropout
  Matrix dropout_mask;       // same shape; empty in eval mode
  Matrix readout_input;      // after dropout
  std::vector<Matrix> hidden_states;  // forward-direction h_t, T_max entries
};

struct ForwardResult {
  Matrix outputs;  // C x B: predictions (C = 1) or logits
  ForwardTrace trace;
};

// Unrolls the cell over each sequence and reads out the last valid hidden
// state. Train mode applies inverted dropout to that state.
ForwardResult forward(const ModelParams& params, const ModelConfig& config,
                      const Batch& batch, Mode mode, Rng& rng);

// Same as forward for a two-direction model; the backward cell reads each
// sequence's valid steps right to left and the final states are
// concatenated (forward first).
ForwardResult forward_bidirectional(const ModelParams& params,
                                    const ModelConfig& config,
                                    const Batch& batch, Mode mode, Rng& rng);

// Eval-mode outputs without keeping the per-step caches; equal to
// forward(..., Mode::kEval, ...).outputs.
Matrix predict(const ModelParams& params, const ModelConfig& config,
               const Batch& batch);

// BPTT. `d_outputs` is dLoss/dOutputs (C x B).
ModelParams backward(const ModelParams& params, const ModelConfig& config,
                     const Batch& batch, const ForwardTrace& trace,
                     const Matrix& d_outputs, bool through_history = true);

double loss_mse(std::span<const double> pred, std::span<const double> target);
double loss_cross_entropy(const Matrix& logits, std::span<const int> labels);
double accuracy(const Matrix& logits, std::span<const int> labels);

// Loss of `outputs` against the batch targets/labels; fills `grad` with
// dLoss/dOutputs when non-null.
double batch_loss(const Matrix& outputs, const Batch& batch, Matrix* grad);

}  // namespace rra

#endif  // RRA_MODEL_H_
