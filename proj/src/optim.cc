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

#include "rra/optim.h"

#include <cmath>
#include <string>

#include "rra/errors.h"

namespace rra {

std::string_view to_string(OptimizerKind kind) {
  return kind == OptimizerKind::kAdadelta ? "adadelta" : "rmsprop";
}

OptimizerKind parse_optimizer_kind(std::string_view name) {
  if (name == "adadelta") return OptimizerKind::kAdadelta;
  if (name == "rmsprop") return OptimizerKind::kRmsprop;
  throw ArgumentError("unknown optimizer '" + std::string(name) +
                      "' (expected adadelta or rmsprop)");
}

OptimState make_optim_state(const OptimizerConfig& config,
                            std::span<const Matrix* const> params) {
  OptimState state;
  state.config = config;
  for (const Matrix* p : params) {
    state.mean_sq_grad.push_back(Matrix::zeros_like(*p));
    if (config.kind == OptimizerKind::kAdadelta) {
      state.mean_sq_update.push_back(Matrix::zeros_like(*p));
    }
  }
  return state;
}

double global_norm(std::span<const Matrix* const> grads) {
  double total = 0.0;
  for (const Matrix* g : grads) total += squared_norm(*g);
  return std::sqrt(total);
}

double clip_gradients(std::span<Matrix* const> grads, double threshold) {
  if (!(threshold > 0.0)) {
    throw ArgumentError("clip_gradients: threshold must be positive");
  }
  std::vector<const Matrix*> view(grads.begin(), grads.end());
  const double norm = global_norm(view);
  if (!(norm > threshold)) return norm;

  // Rounding can leave the scaled norm a few ulps above the threshold;
  // shrink the factor until it is not, so clipping is idempotent.
  double scale = threshold / norm;
  std::vector<Matrix> scaled(grads.size());
  std::vector<const Matrix*> scaled_view(grads.size());
  for (;;) {
    for (std::size_t i = 0; i < grads.size(); ++i) {
      scaled[i] = *grads[i];
      scaled[i] *= scale;
      scaled_view[i] = &scaled[i];
    }
    if (global_norm(scaled_view) <= threshold) break;
    scale = std::nextafter(scale, 0.0);
  }
  for (std::size_t i = 0; i < grads.size(); ++i) *grads[i] = std::move(scaled[i]);
  return norm;
}

namespace {

void check_shapes(const OptimState& state, std::span<Matrix* const> params,
                  std::span<const Matrix* const> grads) {
  if (params.size() != grads.size() ||
      params.size() != state.mean_sq_grad.size()) {
    throw DimensionError("optimizer: " + std::to_string(params.size()) +
                         " parameter blocks, " + std::to_string(grads.size()) +
                         " gradient blocks, " +
                         std::to_string(state.mean_sq_grad.size()) +
                         " accumulators");
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (!params[i]->same_shape(*grads[i]) ||
        !params[i]->same_shape(state.mean_sq_grad[i])) {
      throw DimensionError("optimizer: block " + std::to_string(i) +
                           " parameter " + params[i]->shape_string() +
                           " vs gradient " + grads[i]->shape_string());
    }
  }
}

}  // namespace

void adadelta_step(OptimState& state, std::span<Matrix* const> params,
                   std::span<const Matrix* const> grads) {
  check_shapes(state, params, grads);
  if (state.mean_sq_update.size() != params.size()) {
    throw ArgumentError("adadelta_step: state was not created for ADADELTA");
  }
  const double rho = state.config.rho;
  const double eps = state.config.epsilon;
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto theta = params[i]->values();
    auto g = grads[i]->values();
    auto eg = state.mean_sq_grad[i].values();
    auto edx = state.mean_sq_update[i].values();
    for (std::size_t j = 0; j < theta.size(); ++j) {
      eg[j] = rho * eg[j] + (1.0 - rho) * g[j] * g[j];
      const double dx = -std::sqrt(edx[j] + eps) / std::sqrt(eg[j] + eps) * g[j];
      edx[j] = rho * edx[j] + (1.0 - rho) * dx * dx;
      theta[j] += dx;
    }
  }
  ++state.steps;
}

void rmsprop_step(OptimState& state, std::span<Matrix* const> params,
                  std::span<const Matrix* const> grads) {
  check_shapes(state, params, grads);
  const double decay = state.config.decay;
  const double eps = state.config.epsilon;
  const double lr = state.config.learning_rate;
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto theta = params[i]->values();
    auto g = grads[i]->values();
    auto eg = state.mean_sq_grad[i].values();
    for (std::size_t j = 0; j < theta.size(); ++j) {
      eg[j] = decay * eg[j] + (1.0 - decay) * g[j] * g[j];
      theta[j] -= lr * g[j] / std::sqrt(eg[j] + eps);
    }
  }
  ++state.steps;
}

void optimizer_step(OptimState& state, std::span<Matrix* const> params,
                    std::span<const Matrix* const> grads) {
  if (state.config.kind == OptimizerKind::kAdadelta) {
    adadelta_step(state, params, grads);
  } else {
    rmsprop_step(state, params, grads);
  }
}

}  // namespace rra
