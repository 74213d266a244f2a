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

#ifndef RRA_GRADCHECK_H_
#define RRA_GRADCHECK_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "rra/model.h"

namespace rra {

// Central differences (f(x + eps) - f(x - eps)) / 2 eps for every
// coordinate. Throws NumericError if f returns a non-finite value.
std::vector<double> numeric_gradient(
    const std::function<double(std::span<const double>)>& loss_fn,
    std::span<const double> params, double eps = 1e-5);

// |a - n| / max(|a|, |n|, 1e-8).
double relative_error(double analytic, double numeric);

struct BlockReport {
  std::string name;
  std::size_t count = 0;
  double max_relative_error = 0.0;
  double mean_relative_error = 0.0;
  std::size_t worst_index = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
};

struct GradReport {
  std::vector<BlockReport> blocks;
  double max_relative_error() const;
  bool passed(double tolerance = 1e-4) const {
    return max_relative_error() < tolerance;
  }
};

struct GradcheckOptions {
  std::size_t batch = 2;
  std::size_t steps = 12;
  double eps = 1e-5;
  // Drops the direct attention path in BPTT; only for demonstrating that
  // the check detects a missing gradient term.
  bool drop_history_gradient = false;
  // Scale of the random input values (token models ignore it).
  double input_scale = 1.0;
};

// Builds a random model and batch from `seed`, then compares the analytic
// BPTT gradient of every parameter block with numeric_gradient. Dropout is
// disabled so the loss is deterministic.
GradReport check_gradients(const ModelConfig& config, std::uint64_t seed,
                           const GradcheckOptions& options = {});

void write_report_text(std::ostream& os, const GradReport& report);
void write_report_csv(std::ostream& os, const GradReport& report);

}  // namespace rra

#endif  // RRA_GRADCHECK_H_
