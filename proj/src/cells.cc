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

#include "rra/cells.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "rra/errors.h"
#include "rra/initializers.h"

namespace rra {

namespace {

void check_step_shapes(const CellParams& params, const Matrix& x,
                       const RecurrentState& state) {
  const std::size_t hidden = params.hidden_size();
  if (params.w_gates.rows() != 4 * hidden || params.w_gates.cols() <= hidden) {
    throw DimensionError("cell: malformed gate weights " +
                         params.w_gates.shape_string());
  }
  if (params.b_gates.rows() != 4 * hidden || params.b_gates.cols() != 1) {
    throw DimensionError("cell: bias " + params.b_gates.shape_string() +
                         " does not match " + params.w_gates.shape_string());
  }
  if (x.rows() != params.input_size()) {
    throw DimensionError("cell: input " + x.shape_string() + " expected " +
                         std::to_string(params.input_size()) + " rows");
  }
  if (state.h.rows() != hidden || state.h.cols() != x.cols() ||
      !state.c.same_shape(state.h)) {
    throw DimensionError("cell: state h " + state.h.shape_string() + ", c " +
                         state.c.shape_string() + " vs input " +
                         x.shape_string() + " and hidden size " +
                         std::to_string(hidden));
  }
}

// Gates and memory cell shared by both cell kinds.
void gate_forward(const CellParams& params, const Matrix& x,
                  const RecurrentState& state, StepCache& cache) {
  const std::size_t hidden = params.hidden_size();
  const std::size_t batch = x.cols();
  cache.input = concat_rows(x, state.h);
  Matrix z = matmul(params.w_gates, cache.input);
  const double* bias = params.b_gates.values().data();
  for (std::size_t r = 0; r < 4 * hidden; ++r) {
    for (double& v : z.row(r)) v += bias[r];
  }
  const std::size_t block = hidden * batch;
  sigmoid_inplace(z.values().subspan(0, 3 * block));
  tanh_inplace(z.values().subspan(3 * block, block));
  const double* act = z.values().data();
  auto gate = [&](std::size_t k) {
    return Matrix(hidden, batch,
                  std::vector<double>(act + k * block, act + (k + 1) * block));
  };
  cache.i = gate(0);
  cache.f = gate(1);
  cache.o = gate(2);
  cache.g = gate(3);
  cache.c_prev = state.c;
  cache.c = Matrix(hidden, batch);
  for (std::size_t k = 0; k < block; ++k) {
    cache.c[k] = cache.f[k] * cache.c_prev[k] + cache.i[k] * cache.g[k];
  }
}

template <typename Get>
Matrix weighted_history(std::span<const double> w_a, std::size_t count,
                        Get get) {
  if (count != w_a.size()) {
    throw DimensionError("attention_gate: " + std::to_string(w_a.size()) +
                         " weights for " + std::to_string(count) +
                         " history entries");
  }
  const auto weights = normalize_attention(w_a);
  Matrix a = Matrix::zeros_like(get(0));
  auto dst = a.values();
  for (std::size_t k = 0; k < count; ++k) {
    const Matrix& h = get(k);
    if (!h.same_shape(a)) {
      throw DimensionError("attention_gate: history entry " +
                           h.shape_string() + " vs " + a.shape_string());
    }
    const double w = weights[k];
    auto src = h.values();
    for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += w * src[j];
  }
  return a;
}

}  // namespace

std::string_view to_string(CellKind kind) {
  return kind == CellKind::kLstm ? "lstm" : "rra";
}

CellKind parse_cell_kind(std::string_view name) {
  if (name == "lstm") return CellKind::kLstm;
  if (name == "rra") return CellKind::kRra;
  throw ArgumentError("unknown cell kind '" + std::string(name) +
                      "' (expected lstm or rra)");
}

CellParams CellParams::zeros(CellKind kind, std::size_t input,
                             std::size_t hidden, std::size_t window) {
  CellParams p;
  p.w_gates = Matrix(4 * hidden, input + hidden);
  p.b_gates = Matrix(4 * hidden, 1);
  if (kind == CellKind::kRra) {
    if (window == 0) throw ArgumentError("RRA cell needs K >= 1");
    p.w_a = Matrix(1, window);
  }
  return p;
}

CellParams CellParams::zeros_like(const CellParams& other) {
  CellParams p;
  p.w_gates = Matrix::zeros_like(other.w_gates);
  p.b_gates = Matrix::zeros_like(other.b_gates);
  p.w_a = Matrix::zeros_like(other.w_a);
  return p;
}

CellParams& CellParams::operator+=(const CellParams& other) {
  w_gates += other.w_gates;
  b_gates += other.b_gates;
  w_a += other.w_a;
  return *this;
}

CellParams init_cell(CellKind kind, std::size_t input, std::size_t hidden,
                     std::size_t window, Rng& rng) {
  CellParams p = CellParams::zeros(kind, input, hidden, window);
  for (std::size_t gate = 0; gate < 4; ++gate) {
    const Matrix wx = glorot_uniform(input, hidden, rng);
    const Matrix wh = orthogonal(hidden, rng);
    for (std::size_t r = 0; r < hidden; ++r) {
      auto dst = p.w_gates.row(gate * hidden + r);
      for (std::size_t c = 0; c < input; ++c) dst[c] = wx(r, c);
      for (std::size_t c = 0; c < hidden; ++c) dst[input + c] = wh(r, c);
    }
  }
  if (kind == CellKind::kRra) {
    const auto w = attention_init(window, rng);
    for (std::size_t k = 0; k < window; ++k) p.w_a[k] = w[k];
  }
  return p;
}

RecurrentState RecurrentState::zeros(std::size_t hidden, std::size_t batch,
                                     std::size_t window) {
  RecurrentState s;
  s.h = Matrix(hidden, batch);
  s.c = Matrix(hidden, batch);
  if (window > 0) {
    s.history.assign(window, std::make_shared<const Matrix>(hidden, batch));
  }
  return s;
}

StepOutput lstm_step(const CellParams& params, const Matrix& x,
                     const RecurrentState& state) {
  check_step_shapes(params, x, state);
  StepOutput out;
  gate_forward(params, x, state, out.cache);
  StepCache& cache = out.cache;
  cache.out_tanh = elementwise_unary(cache.c, Unary::kTanh);
  out.h = elementwise_binary(cache.o, cache.out_tanh, Binary::kHadamard);
  out.c = cache.c;
  return out;
}

std::vector<double> normalize_attention(std::span<const double> w_a) {
  if (w_a.empty()) throw ArgumentError("normalize_attention: empty weights");
  double total = 0.0;
  for (double w : w_a) total += w;
  if (!(std::abs(total) > kAttentionEpsilon)) {
    throw DegenerateAttentionError(
        "attention weights sum to " + std::to_string(total) +
        "; cannot normalize (|sum| must exceed 1e-8)");
  }
  std::vector<double> out(w_a.size());
  for (std::size_t k = 0; k < w_a.size(); ++k) out[k] = w_a[k] / total;
  return out;
}

Matrix normalize_attention_jacobian(std::span<const double> w_a) {
  const auto normalized = normalize_attention(w_a);
  double total = 0.0;
  for (double w : w_a) total += w;
  const std::size_t k = w_a.size();
  Matrix jac(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      jac(j, i) = ((i == j ? 1.0 : 0.0) - normalized[i]) / total;
    }
  }
  return jac;
}

Matrix attention_gate(std::span<const double> w_a,
                      std::span<const Matrix> history) {
  return weighted_history(w_a, history.size(), [&](std::size_t k) -> const Matrix& {
    return history[k];
  });
}

Matrix attention_gate(std::span<const double> w_a,
                      std::span<const SharedMatrix> history) {
  return weighted_history(w_a, history.size(), [&](std::size_t k) -> const Matrix& {
    return *history[k];
  });
}

RecurrentState advance_state(const RecurrentState& state, Matrix h, Matrix c) {
  return advance_state(RecurrentState(state), std::move(h), std::move(c));
}

RecurrentState advance_state(RecurrentState&& state, Matrix h, Matrix c) {
  RecurrentState next;
  if (!state.history.empty()) {
    next.history = std::move(state.history);
    std::rotate(next.history.rbegin(), next.history.rbegin() + 1,
                next.history.rend());
    next.history.front() = std::make_shared<const Matrix>(std::move(state.h));
  }
  next.h = std::move(h);
  next.c = std::move(c);
  return next;
}

RraStepOutput rra_step(const CellParams& params, const Matrix& x,
                       const RecurrentState& state) {
  check_step_shapes(params, x, state);
  if (params.kind() != CellKind::kRra) {
    throw ArgumentError("rra_step: parameters have no attention weights");
  }
  if (state.history.size() != params.window()) {
    throw DimensionError("rra_step: history holds " +
                         std::to_string(state.history.size()) +
                         " states, window is " +
                         std::to_string(params.window()));
  }
  RraStepOutput out;
  StepCache& cache = out.cache;
  gate_forward(params, x, state, cache);
  cache.attention = normalize_attention(params.w_a.values());
  cache.attention_sum = 0.0;
  for (double w : params.w_a.values()) cache.attention_sum += w;
  cache.a = attention_gate(params.w_a.values(), state.history);
  cache.history = state.history;
  cache.out_tanh = cache.c;
  cache.out_tanh += cache.a;
  tanh_inplace(cache.out_tanh.values());
  out.h = elementwise_binary(cache.o, cache.out_tanh, Binary::kHadamard);
  out.c = cache.c;
  out.next = advance_state(state, out.h, out.c);
  return out;
}

RecurrentState cell_step(const CellParams& params, const Matrix& x,
                         const RecurrentState& state, StepCache* cache) {
  if (params.kind() == CellKind::kRra) {
    RraStepOutput out = rra_step(params, x, state);
    if (cache != nullptr) *cache = std::move(out.cache);
    return std::move(out.next);
  }
  StepOutput out = lstm_step(params, x, state);
  if (cache != nullptr) *cache = std::move(out.cache);
  return advance_state(state, std::move(out.h), std::move(out.c));
}

StepGradients step_backward(const CellParams& params, const StepCache& cache,
                            const Matrix& dh, const Matrix& dc,
                            CellParams& grads, bool through_history) {
  const std::size_t hidden = params.hidden_size();
  const std::size_t batch = cache.c.cols();
  if (dh.rows() != hidden || dh.cols() != batch) {
    throw DimensionError("step_backward: dh " + dh.shape_string() +
                         " vs state " + cache.c.shape_string());
  }
  const bool has_dc = !dc.empty();
  if (has_dc && !dc.same_shape(dh)) {
    throw DimensionError("step_backward: dc " + dc.shape_string() +
                         " vs dh " + dh.shape_string());
  }

  Matrix dz(4 * hidden, batch);
  Matrix d_pre(hidden, batch);  // gradient at c_t + a_t
  StepGradients out;
  out.dc_prev = Matrix(hidden, batch);
  for (std::size_t r = 0; r < hidden; ++r) {
    for (std::size_t b = 0; b < batch; ++b) {
      const std::size_t k = r * batch + b;
      const double u = cache.out_tanh[k];
      const double o = cache.o[k];
      const double i = cache.i[k];
      const double f = cache.f[k];
      const double g = cache.g[k];
      const double dpre = dh[k] * o * (1.0 - u * u);
      d_pre[k] = dpre;
      const double dct = (has_dc ? dc[k] : 0.0) + dpre;
      out.dc_prev[k] = dct * f;
      dz(r, b) = dct * g * i * (1.0 - i);
      dz(hidden + r, b) = dct * cache.c_prev[k] * f * (1.0 - f);
      dz(2 * hidden + r, b) = dh[k] * u * o * (1.0 - o);
      dz(3 * hidden + r, b) = dct * i * (1.0 - g * g);
    }
  }
  add_matmul_nt(grads.w_gates, dz, cache.input);
  grads.b_gates += row_sums(dz);
  const Matrix dinput = matmul_tn(params.w_gates, dz);
  out.dx = dinput.row_block(0, params.input_size());
  out.dh_prev = dinput.row_block(params.input_size(), hidden);

  if (params.kind() == CellKind::kRra) {
    const std::size_t window = params.window();
    std::vector<double> d_norm(window);
    double weighted = 0.0;
    for (std::size_t k = 0; k < window; ++k) {
      d_norm[k] = dot(d_pre, *cache.history[k]);
      weighted += d_norm[k] * cache.attention[k];
    }
    for (std::size_t k = 0; k < window; ++k) {
      grads.w_a[k] += (d_norm[k] - weighted) / cache.attention_sum;
    }
    if (through_history) {
      out.dhistory.reserve(window);
      for (std::size_t k = 0; k < window; ++k) {
        Matrix dhist = d_pre;
        dhist *= cache.attention[k];
        out.dhistory.push_back(std::move(dhist));
      }
    }
  }
  return out;
}

std::size_t parameter_count(CellKind kind, std::size_t input,
                            std::size_t hidden, std::size_t window) {
  const std::size_t lstm = 4 * hidden * (input + hidden) + 4 * hidden;
  return kind == CellKind::kLstm ? lstm : lstm + window;
}

}  // namespace rra
