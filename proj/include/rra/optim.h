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

#ifndef RRA_OPTIM_H_
#define RRA_OPTIM_H_

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "rra/matrix.h"

namespace rra {

enum class OptimizerKind { kAdadelta, kRmsprop };

std::string_view to_string(OptimizerKind kind);
OptimizerKind parse_optimizer_kind(std::string_view name);

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::kAdadelta;
  double rho = 0.95;            // ADADELTA decay
  double epsilon = 1e-6;
  double decay = 0.9;           // RMSprop decay
  double learning_rate = 1e-4;  // RMSprop only; ADADELTA has none
};

// Per-parameter accumulators, zero at creation and shaped like the
// parameter blocks they track.
struct OptimState {
  OptimizerConfig config;
  std::vector<Matrix> mean_sq_grad;    // E[g^2]
  std::vector<Matrix> mean_sq_update;  // E[dx^2], ADADELTA only
  std::uint64_t steps = 0;
};

OptimState make_optim_state(const OptimizerConfig& config,
                            std::span<const Matrix* const> params);

double global_norm(std::span<const Matrix* const> grads);

// Global L2-norm clipping: when the joint norm exceeds `threshold` every
// block is scaled by threshold / norm. Returns the norm before clipping.
double clip_gradients(std::span<Matrix* const> grads, double threshold = 1.0);

void adadelta_step(OptimState& state, std::span<Matrix* const> params,
                   std::span<const Matrix* const> grads);
void rmsprop_step(OptimState& state, std::span<Matrix* const> params,
                  std::span<const Matrix* const> grads);
// Dispatches on state.config.kind.
void optimizer_step(OptimState& state, std::span<Matrix* const> params,
                    std::span<const Matrix* const> grads);

}  // namespace rra

#endif  // RRA_OPTIM_H_
