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

#include "rra/model.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "rra/errors.h"
#include "rra/initializers.h"

namespace rra {

void ModelConfig::validate() const {
  if (hidden == 0) throw ArgumentError("model: hidden size must be positive");
  if (outputs == 0) throw ArgumentError("model: need at least one output");
  if (cell == CellKind::kRra && window == 0) {
    throw ArgumentError("model: RRA window K must be >= 1");
  }
  if (vocab > 0 && embedding == 0) {
    throw ArgumentError("model: token input needs an embedding size");
  }
  if (vocab == 0 && input_size == 0) {
    throw ArgumentError("model: input size must be positive");
  }
  if (!(dropout >= 0.0 && dropout < 1.0)) {
    throw ArgumentError("model: dropout rate must be in [0, 1)");
  }
}

std::vector<ParamBlock> ModelParams::blocks() {
  std::vector<ParamBlock> out;
  auto add = [&out](const char* name, Matrix& m) {
    if (!m.empty()) out.push_back({name, &m});
  };
  add("embedding", embedding);
  add("fwd.w_gates", forward_cell.w_gates);
  add("fwd.b_gates", forward_cell.b_gates);
  add("fwd.w_a", forward_cell.w_a);
  add("bwd.w_gates", backward_cell.w_gates);
  add("bwd.b_gates", backward_cell.b_gates);
  add("bwd.w_a", backward_cell.w_a);
  add("readout.w", readout_w);
  add("readout.b", readout_b);
  return out;
}

std::vector<ConstParamBlock> ModelParams::blocks() const {
  std::vector<ConstParamBlock> out;
  for (const auto& b : const_cast<ModelParams*>(this)->blocks()) {
    out.push_back({b.name, b.value});
  }
  return out;
}

ModelParams ModelParams::zeros_like(const ModelParams& other) {
  ModelParams p;
  p.embedding = Matrix::zeros_like(other.embedding);
  p.forward_cell = CellParams::zeros_like(other.forward_cell);
  p.backward_cell = CellParams::zeros_like(other.backward_cell);
  p.readout_w = Matrix::zeros_like(other.readout_w);
  p.readout_b = Matrix::zeros_like(other.readout_b);
  return p;
}

ModelParams init_model(const ModelConfig& config, Rng& rng) {
  config.validate();
  ModelParams p;
  Rng embed_rng = rng.split("embedding");
  Rng fwd_rng = rng.split("forward-cell");
  Rng bwd_rng = rng.split("backward-cell");
  Rng out_rng = rng.split("readout");
  if (config.vocab > 0) {
    p.embedding = glorot_uniform(config.embedding, config.vocab, embed_rng);
  }
  p.forward_cell = init_cell(config.cell, config.cell_input(), config.hidden,
                             config.window, fwd_rng);
  if (config.bidirectional) {
    p.backward_cell = init_cell(config.cell, config.cell_input(),
                                config.hidden, config.window, bwd_rng);
  }
  p.readout_w = glorot_uniform(config.readout_width(), config.outputs, out_rng);
  p.readout_b = Matrix(config.outputs, 1);
  return p;
}

std::size_t Batch::size() const {
  if (!steps.empty()) return steps.front().cols();
  return tokens.size();
}

std::size_t Batch::length() const {
  if (!steps.empty()) return steps.size();
  return tokens.empty() ? 0 : tokens.front().size();
}

std::vector<std::size_t> Batch::valid_lengths() const {
  const std::size_t batch = size();
  const std::size_t steps_count = length();
  std::vector<std::size_t> lengths(batch, steps_count);
  if (mask.empty()) return lengths;
  if (mask.size() != batch) {
    throw DimensionError("batch: mask has " + std::to_string(mask.size()) +
                         " rows for " + std::to_string(batch) + " sequences");
  }
  for (std::size_t b = 0; b < batch; ++b) {
    if (mask[b].size() != steps_count) {
      throw DimensionError("batch: mask row " + std::to_string(b) +
                           " has wrong length");
    }
    std::size_t n = 0;
    while (n < steps_count && mask[b][n]) ++n;
    for (std::size_t t = n; t < steps_count; ++t) {
      if (mask[b][t]) {
        throw ArgumentError("batch: mask of sequence " + std::to_string(b) +
                            " is not prefix-contiguous");
      }
    }
    lengths[b] = n;
  }
  return lengths;
}

namespace {

struct Inputs {
  std::vector<Matrix> forward;   // T_max entries of D x B
  std::vector<Matrix> reversed;  // bidirectional only
};

void check_batch(const ModelConfig& config, const Batch& batch,
                 const std::vector<std::size_t>& lengths) {
  const std::size_t n = batch.size();
  if (n == 0) throw ArgumentError("forward: empty batch");
  for (std::size_t b = 0; b < n; ++b) {
    if (lengths[b] == 0) {
      throw ArgumentError("forward: sequence " + std::to_string(b) +
                          " is empty");
    }
  }
  if (config.vocab > 0) {
    if (batch.tokens.empty()) {
      throw ArgumentError("forward: model expects token input");
    }
    for (std::size_t b = 0; b < n; ++b) {
      if (batch.tokens[b].size() != batch.length()) {
        throw DimensionError("forward: ragged token batch");
      }
      for (std::size_t t = 0; t < lengths[b]; ++t) {
        const int id = batch.tokens[b][t];
        if (id < 0 || static_cast<std::size_t>(id) >= config.vocab) {
          throw ArgumentError("forward: token id " + std::to_string(id) +
                              " outside vocabulary of " +
                              std::to_string(config.vocab));
        }
      }
    }
  } else {
    if (batch.steps.empty()) {
      throw ArgumentError("forward: model expects real-valued input");
    }
    for (const Matrix& x : batch.steps) {
      if (x.rows() != config.input_size || x.cols() != n) {
        throw DimensionError("forward: step input " + x.shape_string() +
                             " expected " + std::to_string(config.input_size) +
                             "x" + std::to_string(n));
      }
    }
  }
}

// Value fed to the cell for sequence b at (unreversed) position t.
void put_input(const ModelParams& params, const ModelConfig& config,
               const Batch& batch, std::size_t b, std::size_t t, Matrix& dst,
               std::size_t col) {
  if (config.vocab > 0) {
    auto row = params.embedding.row(batch.tokens[b][t]);
    for (std::size_t e = 0; e < row.size(); ++e) dst(e, col) = row[e];
  } else {
    const Matrix& x = batch.steps[t];
    for (std::size_t d = 0; d < x.rows(); ++d) dst(d, col) = x(d, b);
  }
}

Inputs gather_inputs(const ModelParams& params, const ModelConfig& config,
                     const Batch& batch,
                     const std::vector<std::size_t>& lengths,
                     std::size_t max_len) {
  const std::size_t n = batch.size();
  const std::size_t width = config.cell_input();
  Inputs in;
  in.forward.assign(max_len, Matrix(width, n));
  if (config.bidirectional) in.reversed.assign(max_len, Matrix(width, n));
  for (std::size_t b = 0; b < n; ++b) {
    for (std::size_t t = 0; t < lengths[b]; ++t) {
      put_input(params, config, batch, b, t, in.forward[t], b);
      if (config.bidirectional) {
        put_input(params, config, batch, b, t, in.reversed[lengths[b] - 1 - t],
                  b);
      }
    }
  }
  return in;
}

// Runs one direction; returns the hidden state at each sequence's last
// valid step.
Matrix run_direction(const CellParams& cell, const std::vector<Matrix>& inputs,
                     const std::vector<std::size_t>& lengths,
                     DirectionTrace* trace, std::vector<Matrix>* hidden) {
  const std::size_t n = lengths.size();
  const std::size_t hidden_size = cell.hidden_size();
  RecurrentState state = RecurrentState::zeros(hidden_size, n, cell.window());
  Matrix final_state(hidden_size, n);
  if (trace != nullptr) trace->steps.resize(inputs.size());
  for (std::size_t t = 0; t < inputs.size(); ++t) {
    state = cell_step(cell, inputs[t], state,
                      trace != nullptr ? &trace->steps[t] : nullptr);
    for (std::size_t b = 0; b < n; ++b) {
      if (lengths[b] == t + 1) final_state.set_col(b, state.h.col(b));
    }
    if (hidden != nullptr) hidden->push_back(state.h);
  }
  return final_state;
}

// BPTT over one direction given dLoss/d(final state). Returns dLoss/dx_t.
std::vector<Matrix> backward_direction(const CellParams& cell,
                                       const DirectionTrace& trace,
                                       const std::vector<std::size_t>& lengths,
                                       const Matrix& d_final,
                                       CellParams& grads,
                                       bool through_history) {
  const std::size_t steps = trace.steps.size();
  const std::size_t n = lengths.size();
  const std::size_t hidden_size = cell.hidden_size();
  std::vector<Matrix> dh(steps, Matrix(hidden_size, n));
  for (std::size_t b = 0; b < n; ++b) {
    const std::size_t last = lengths[b] - 1;
    for (std::size_t r = 0; r < hidden_size; ++r) dh[last](r, b) = d_final(r, b);
  }
  std::vector<Matrix> dx(steps);
  Matrix dc;
  for (std::size_t t = steps; t-- > 0;) {
    StepGradients g = step_backward(cell, trace.steps[t], dh[t], dc, grads,
                                    through_history);
    if (t >= 1) dh[t - 1] += g.dh_prev;
    // history[k] at step t is the output of step t - 2 - k; earlier
    // positions are the zero padding and the fixed initial state.
    for (std::size_t k = 0; k < g.dhistory.size(); ++k) {
      if (t >= k + 2) dh[t - 2 - k] += g.dhistory[k];
    }
    dc = std::move(g.dc_prev);
    dx[t] = std::move(g.dx);
  }
  return dx;
}

ForwardResult forward_impl(const ModelParams& params,
                           const ModelConfig& config, const Batch& batch,
                           Mode mode, Rng& rng, bool record) {
  config.validate();
  if (config.bidirectional != params.bidirectional()) {
    throw ArgumentError("forward: parameter directionality does not match "
                        "the configuration");
  }
  ForwardResult result;
  ForwardTrace& trace = result.trace;
  trace.lengths = batch.valid_lengths();
  check_batch(config, batch, trace.lengths);
  const std::size_t max_len =
      *std::max_element(trace.lengths.begin(), trace.lengths.end());
  const std::size_t n = batch.size();

  const Inputs in = gather_inputs(params, config, batch, trace.lengths, max_len);
  const Matrix fwd_final = run_direction(
      params.forward_cell, in.forward, trace.lengths,
      record ? &trace.forward : nullptr,
      record ? &trace.hidden_states : nullptr);
  if (config.bidirectional) {
    const Matrix bwd_final = run_direction(
        params.backward_cell, in.reversed, trace.lengths,
        record ? &trace.backward : nullptr, nullptr);
    trace.final_state = concat_rows(fwd_final, bwd_final);
  } else {
    trace.final_state = fwd_final;
  }

  trace.readout_input = trace.final_state;
  if (mode == Mode::kTrain && config.dropout > 0.0) {
    const double keep = 1.0 - config.dropout;
    trace.dropout_mask = Matrix::zeros_like(trace.final_state);
    for (double& m : trace.dropout_mask.values()) {
      m = rng.uniform() < config.dropout ? 0.0 : 1.0 / keep;
    }
    trace.readout_input = elementwise_binary(
        trace.final_state, trace.dropout_mask, Binary::kHadamard);
  }

  result.outputs = matmul(params.readout_w, trace.readout_input);
  for (std::size_t c = 0; c < result.outputs.rows(); ++c) {
    for (std::size_t b = 0; b < n; ++b) {
      result.outputs(c, b) += params.readout_b[c];
    }
  }
  return result;
}

}  // namespace

ForwardResult forward(const ModelParams& params, const ModelConfig& config,
                      const Batch& batch, Mode mode, Rng& rng) {
  return forward_impl(params, config, batch, mode, rng, true);
}

ForwardResult forward_bidirectional(const ModelParams& params,
                                    const ModelConfig& config,
                                    const Batch& batch, Mode mode, Rng& rng) {
  if (!config.bidirectional || !params.bidirectional()) {
    throw ArgumentError("forward_bidirectional: model has a single direction");
  }
  return forward_impl(params, config, batch, mode, rng, true);
}

Matrix predict(const ModelParams& params, const ModelConfig& config,
               const Batch& batch) {
  Rng unused(0);
  return forward_impl(params, config, batch, Mode::kEval, unused, false)
      .outputs;
}

ModelParams backward(const ModelParams& params, const ModelConfig& config,
                     const Batch& batch, const ForwardTrace& trace,
                     const Matrix& d_outputs, bool through_history) {
  const std::size_t n = batch.size();
  if (d_outputs.rows() != params.readout_w.rows() || d_outputs.cols() != n) {
    throw DimensionError("backward: d_outputs " + d_outputs.shape_string() +
                         " vs " + std::to_string(params.readout_w.rows()) +
                         "x" + std::to_string(n));
  }
  ModelParams grads = ModelParams::zeros_like(params);
  add_matmul_nt(grads.readout_w, d_outputs, trace.readout_input);
  grads.readout_b += row_sums(d_outputs);

  Matrix d_state = matmul_tn(params.readout_w, d_outputs);
  if (!trace.dropout_mask.empty()) {
    d_state = elementwise_binary(d_state, trace.dropout_mask, Binary::kHadamard);
  }
  const std::size_t hidden = config.hidden;
  const Matrix d_fwd = config.bidirectional ? d_state.row_block(0, hidden)
                                            : d_state;
  const std::vector<Matrix> dx_fwd =
      backward_direction(params.forward_cell, trace.forward, trace.lengths,
                         d_fwd, grads.forward_cell, through_history);
  std::vector<Matrix> dx_bwd;
  if (config.bidirectional) {
    dx_bwd = backward_direction(params.backward_cell, trace.backward,
                                trace.lengths, d_state.row_block(hidden, hidden),
                                grads.backward_cell, through_history);
  }

  if (config.vocab > 0) {
    for (std::size_t b = 0; b < n; ++b) {
      const std::size_t len = trace.lengths[b];
      for (std::size_t t = 0; t < len; ++t) {
        auto row = grads.embedding.row(batch.tokens[b][t]);
        for (std::size_t e = 0; e < row.size(); ++e) {
          row[e] += dx_fwd[t](e, b);
          if (config.bidirectional) row[e] += dx_bwd[len - 1 - t](e, b);
        }
      }
    }
  }
  return grads;
}

double loss_mse(std::span<const double> pred, std::span<const double> target) {
  if (pred.size() != target.size()) {
    throw DimensionError("loss_mse: " + std::to_string(pred.size()) +
                         " predictions for " + std::to_string(target.size()) +
                         " targets");
  }
  if (pred.empty()) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - target[i];
    s += d * d;
  }
  return s / static_cast<double>(pred.size());
}

namespace {

void check_labels(const Matrix& logits, std::span<const int> labels) {
  if (logits.cols() != labels.size()) {
    throw DimensionError("labels: " + std::to_string(labels.size()) +
                         " labels for logits " + logits.shape_string());
  }
  for (int y : labels) {
    if (y < 0 || static_cast<std::size_t>(y) >= logits.rows()) {
      throw ArgumentError("label " + std::to_string(y) + " outside [0, " +
                          std::to_string(logits.rows()) + ")");
    }
  }
}

// log sum_c exp(logits(c, b)) with max subtraction.
double log_sum_exp(const Matrix& logits, std::size_t b, double* max_out) {
  double m = logits(0, b);
  for (std::size_t c = 1; c < logits.rows(); ++c) m = std::max(m, logits(c, b));
  double s = 0.0;
  for (std::size_t c = 0; c < logits.rows(); ++c) {
    s += std::exp(logits(c, b) - m);
  }
  if (max_out != nullptr) *max_out = m;
  return m + std::log(s);
}

}  // namespace

double loss_cross_entropy(const Matrix& logits, std::span<const int> labels) {
  check_labels(logits, labels);
  if (labels.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t b = 0; b < labels.size(); ++b) {
    total += log_sum_exp(logits, b, nullptr) - logits(labels[b], b);
  }
  return total / static_cast<double>(labels.size());
}

double accuracy(const Matrix& logits, std::span<const int> labels) {
  check_labels(logits, labels);
  if (labels.empty()) return 0.0;
  std::size_t correct = 0;
  for (std::size_t b = 0; b < labels.size(); ++b) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < logits.rows(); ++c) {
      if (logits(c, b) > logits(best, b)) best = c;
    }
    if (static_cast<int>(best) == labels[b]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(labels.size());
}

double batch_loss(const Matrix& outputs, const Batch& batch, Matrix* grad) {
  const std::size_t n = outputs.cols();
  const double scale = 1.0 / static_cast<double>(n);
  if (batch.classification()) {
    const double loss = loss_cross_entropy(outputs, batch.labels);
    if (grad != nullptr) {
      *grad = Matrix::zeros_like(outputs);
      for (std::size_t b = 0; b < n; ++b) {
        const double lse = log_sum_exp(outputs, b, nullptr);
        for (std::size_t c = 0; c < outputs.rows(); ++c) {
          (*grad)(c, b) = std::exp(outputs(c, b) - lse) * scale;
        }
        (*grad)(batch.labels[b], b) -= scale;
      }
    }
    return loss;
  }
  if (outputs.rows() != 1) {
    throw DimensionError("regression expects a single output row, got " +
                         outputs.shape_string());
  }
  const double loss = loss_mse(outputs.values(), batch.targets);
  if (grad != nullptr) {
    *grad = Matrix::zeros_like(outputs);
    for (std::size_t b = 0; b < n; ++b) {
      (*grad)[b] = 2.0 * (outputs[b] - batch.targets[b]) * scale;
    }
  }
  return loss;
}

}  // namespace rra
