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

#ifndef RRA_CELLS_H_
#define RRA_CELLS_H_

#include <cstddef>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "rra/matrix.h"
#include "rra/rng.h"

namespace rra {

enum class CellKind { kLstm, kRra };

std::string_view to_string(CellKind kind);
CellKind parse_cell_kind(std::string_view name);

// |sum of raw attention weights| at or below this cannot be normalized.
inline constexpr double kAttentionEpsilon = 1e-8;

// Trainable parameters of one recurrent cell. Gradients use the same type.
struct CellParams {
  Matrix w_gates;  // 4H x (D + H); row blocks (i, f, o, g) over [x_t; h_{t-1}]
  Matrix b_gates;  // 4H x 1
  Matrix w_a;      // 1 x K raw attention weights; empty for the LSTM

  CellKind kind() const { return w_a.empty() ? CellKind::kLstm : CellKind::kRra; }
  std::size_t hidden_size() const { return w_gates.rows() / 4; }
  std::size_t input_size() const { return w_gates.cols() - hidden_size(); }
  std::size_t window() const { return w_a.size(); }

  static CellParams zeros(CellKind kind, std::size_t input, std::size_t hidden,
                          std::size_t window);
  static CellParams zeros_like(const CellParams& other);
  CellParams& operator+=(const CellParams& other);
};

// Input block of each gate is Glorot uniform, the recurrent block of each
// gate is orthogonal, biases are zero and attention weights are drawn by
// attention_init.
CellParams init_cell(CellKind kind, std::size_t input, std::size_t hidden,
                     std::size_t window, Rng& rng);

// Past hidden states are immutable once produced, so the history window
// and the step caches share them instead of copying.
using SharedMatrix = std::shared_ptr<const Matrix>;

// Running state of a batch of sequences (one column per sequence).
struct RecurrentState {
  Matrix h;  // h_{t-1}
  Matrix c;  // c_{t-1}
  // Exactly K entries, newest first: h_{t-2}, h_{t-3}, ..., h_{t-K-1}.
  // Positions before the sequence start hold zeros.
  std::vector<SharedMatrix> history;

  static RecurrentState zeros(std::size_t hidden, std::size_t batch,
                              std::size_t window);
};

// Everything the backward pass needs from one executed timestep.
struct StepCache {
  Matrix input;  // [x_t; h_{t-1}]
  Matrix i, f, o, g;
  Matrix c_prev;
  Matrix c;
  Matrix out_tanh;                // tanh(c_t + a_t)
  Matrix a;                       // attention gate output; empty for LSTM
  std::vector<SharedMatrix> history;  // attended states at this step
  std::vector<double> attention;  // normalized weights
  double attention_sum = 0.0;     // sum of raw weights
};

struct StepOutput {
  Matrix h;
  Matrix c;
  StepCache cache;
};

struct RraStepOutput {
  Matrix h;
  Matrix c;
  RecurrentState next;
  StepCache cache;
};

// Plain LSTM transition. Ignores state.history.
StepOutput lstm_step(const CellParams& params, const Matrix& x,
                     const RecurrentState& state);

// w_a / sum(w_a). Throws DegenerateAttentionError when |sum| <= 1e-8.
std::vector<double> normalize_attention(std::span<const double> w_a);

// K x K matrix whose row j holds d normalized_i / d raw_j for every i.
Matrix normalize_attention_jacobian(std::span<const double> w_a);

// Sum over k of normalized(w_a)_k * history_k.
Matrix attention_gate(std::span<const double> w_a,
                      std::span<const Matrix> history);
Matrix attention_gate(std::span<const double> w_a,
                      std::span<const SharedMatrix> history);

// LSTM gates and memory cell, then h_t = o_t * tanh(c_t + a_t). The memory
// cell carried to the next step is c_t itself; a_t only shapes the output.
RraStepOutput rra_step(const CellParams& params, const Matrix& x,
                       const RecurrentState& state);

// Dispatches on params.kind() and returns the advanced state.
RecurrentState cell_step(const CellParams& params, const Matrix& x,
                         const RecurrentState& state, StepCache* cache);

// Pushes the outgoing h_{t-1} onto the history and installs (h, c).
RecurrentState advance_state(const RecurrentState& state, Matrix h, Matrix c);
RecurrentState advance_state(RecurrentState&& state, Matrix h, Matrix c);

struct StepGradients {
  Matrix dx;
  Matrix dh_prev;
  Matrix dc_prev;
  std::vector<Matrix> dhistory;  // aligned with StepCache::history
};

// Backpropagates one step. `dh` is the total gradient reaching h_t and
// `dc` the gradient reaching c_t from the following step; parameter
// gradients are accumulated into `grads`. With through_history == false the
// direct attention path into earlier states is dropped (used only to check
// that the gradient check notices).
StepGradients step_backward(const CellParams& params, const StepCache& cache,
                            const Matrix& dh, const Matrix& dc,
                            CellParams& grads, bool through_history = true);

// LSTM: 4H(D+H) + 4H. RRA adds the K attention weights.
std::size_t parameter_count(CellKind kind, std::size_t input,
                            std::size_t hidden, std::size_t window);

}  // namespace rra

#endif  // RRA_CELLS_H_
