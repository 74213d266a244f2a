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

#include "rra/gradcheck.h"

#include <algorithm>
#include <cmath>
#include <iomanip>

#include "rra/errors.h"

namespace rra {

std::vector<double> numeric_gradient(
    const std::function<double(std::span<const double>)>& loss_fn,
    std::span<const double> params, double eps) {
  if (!(eps > 0.0)) throw ArgumentError("numeric_gradient: eps must be > 0");
  std::vector<double> theta(params.begin(), params.end());
  std::vector<double> grad(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double saved = theta[i];
    theta[i] = saved + eps;
    const double up = loss_fn(theta);
    theta[i] = saved - eps;
    const double down = loss_fn(theta);
    theta[i] = saved;
    if (!std::isfinite(up) || !std::isfinite(down)) {
      throw NumericError("numeric_gradient: non-finite loss at coordinate " +
                         std::to_string(i));
    }
    grad[i] = (up - down) / (2.0 * eps);
  }
  return grad;
}

double relative_error(double analytic, double numeric) {
  const double denom =
      std::max({std::abs(analytic), std::abs(numeric), 1e-8});
  return std::abs(analytic - numeric) / denom;
}

double GradReport::max_relative_error() const {
  double m = 0.0;
  for (const auto& b : blocks) m = std::max(m, b.max_relative_error);
  return m;
}

namespace {

Batch random_batch(const ModelConfig& config, const GradcheckOptions& options,
                   Rng& rng) {
  Batch batch;
  const std::size_t n = options.batch;
  const std::size_t steps = options.steps;
  if (config.vocab > 0) {
    batch.tokens.assign(n, std::vector<int>(steps));
    for (auto& seq : batch.tokens) {
      for (int& id : seq) id = static_cast<int>(rng.below(config.vocab));
    }
  } else {
    for (std::size_t t = 0; t < steps; ++t) {
      Matrix x(config.input_size, n);
      for (double& v : x.values()) {
        v = rng.uniform(-options.input_scale, options.input_scale);
      }
      batch.steps.push_back(std::move(x));
    }
  }
  // Ragged lengths exercise the mask: the last sequence is shortened.
  if (n > 1 && steps > 2) {
    batch.mask.assign(n, std::vector<std::uint8_t>(steps, 1));
    for (std::size_t t = steps - steps / 4; t < steps; ++t) {
      batch.mask[n - 1][t] = 0;
    }
  }
  if (config.outputs > 1) {
    for (std::size_t b = 0; b < n; ++b) {
      batch.labels.push_back(static_cast<int>(rng.below(config.outputs)));
    }
  } else {
    for (std::size_t b = 0; b < n; ++b) batch.targets.push_back(rng.uniform(0, 2));
  }
  return batch;
}

}  // namespace

GradReport check_gradients(const ModelConfig& config, std::uint64_t seed,
                           const GradcheckOptions& options) {
  Rng rng(seed);
  Rng init_rng = rng.split("init");
  Rng data_rng = rng.split("data");
  ModelParams params = init_model(config, init_rng);
  // Perturb biases and push the attention weights away from their
  // initialization range so every block is exercised in a generic state.
  for (auto block : params.blocks()) {
    if (block.name.ends_with("b_gates") || block.name == "readout.b") {
      for (double& v : block.value->values()) v = data_rng.uniform(-0.5, 0.5);
    }
  }
  const Batch batch = random_batch(config, options, data_rng);

  Rng unused(0);
  auto loss_of = [&](const ModelParams& p) {
    const ForwardResult r = forward(p, config, batch, Mode::kEval, unused);
    return batch_loss(r.outputs, batch, nullptr);
  };

  const ForwardResult fwd = forward(params, config, batch, Mode::kEval, unused);
  Matrix d_out;
  batch_loss(fwd.outputs, batch, &d_out);
  ModelParams analytic = backward(params, config, batch, fwd.trace, d_out,
                                  !options.drop_history_gradient);

  GradReport report;
  auto analytic_blocks = analytic.blocks();
  auto param_blocks = params.blocks();
  for (std::size_t bi = 0; bi < param_blocks.size(); ++bi) {
    Matrix& value = *param_blocks[bi].value;
    const Matrix& grad = *analytic_blocks[bi].value;
    auto fn = [&](std::span<const double> theta) {
      const Matrix saved = value;
      std::copy(theta.begin(), theta.end(), value.values().begin());
      const double l = loss_of(params);
      value = saved;
      return l;
    };
    const std::vector<double> saved(value.values().begin(),
                                    value.values().end());
    const std::vector<double> numeric =
        numeric_gradient(fn, saved, options.eps);

    BlockReport br;
    br.name = param_blocks[bi].name;
    br.count = numeric.size();
    double total = 0.0;
    for (std::size_t i = 0; i < numeric.size(); ++i) {
      const double err = relative_error(grad[i], numeric[i]);
      total += err;
      if (i == 0 || err > br.max_relative_error) {
        br.max_relative_error = err;
        br.worst_index = i;
        br.worst_analytic = grad[i];
        br.worst_numeric = numeric[i];
      }
    }
    br.mean_relative_error =
        numeric.empty() ? 0.0 : total / static_cast<double>(numeric.size());
    report.blocks.push_back(br);
  }
  return report;
}

void write_report_text(std::ostream& os, const GradReport& report) {
  os << std::left << std::setw(14) << "block" << std::right << std::setw(8)
     << "count" << std::setw(14) << "max_rel" << std::setw(14) << "mean_rel"
     << std::setw(8) << "worst" << "\n";
  for (const auto& b : report.blocks) {
    os << std::left << std::setw(14) << b.name << std::right << std::setw(8)
       << b.count << std::scientific << std::setprecision(3) << std::setw(14)
       << b.max_relative_error << std::setw(14) << b.mean_relative_error
       << std::defaultfloat << std::setw(8) << b.worst_index << "\n";
  }
  os << "max relative error: " << std::scientific << std::setprecision(3)
     << report.max_relative_error() << std::defaultfloat << "\n";
}

void write_report_csv(std::ostream& os, const GradReport& report) {
  os << "block,count,max_relative_error,mean_relative_error,worst_index,"
        "worst_analytic,worst_numeric\n";
  os << std::setprecision(17);
  for (const auto& b : report.blocks) {
    os << b.name << "," << b.count << "," << b.max_relative_error << ","
       << b.mean_relative_error << "," << b.worst_index << ","
       << b.worst_analytic << "," << b.worst_numeric << "\n";
  }
}

}  // namespace rra
