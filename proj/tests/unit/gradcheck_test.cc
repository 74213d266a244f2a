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

#include <cmath>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "rra/cells.h"
#include "rra/errors.h"
#include "rra/gradcheck.h"
#include "rra/model.h"
#include "rra/rng.h"

namespace rra {
namespace {

ModelConfig small_config(CellKind cell) {
  ModelConfig c;
  c.cell = cell;
  c.input_size = 3;
  c.hidden = 4;
  c.window = 3;
  c.outputs = 1;
  return c;
}

bool has_block(const GradReport& r, const std::string& name) {
  for (const auto& b : r.blocks) {
    if (b.name == name) return true;
  }
  return false;
}

TEST_CASE("numeric_gradient of simple functions") {
  const std::vector<double> theta{0.3, -1.7, 2.5, 0.0};
  const auto quad = [](std::span<const double> t) {
    double s = 0.0;
    for (double v : t) s += 0.5 * v * v;
    return s;
  };
  const auto g = numeric_gradient(quad, theta, 1e-5);
  for (std::size_t i = 0; i < theta.size(); ++i) {
    CHECK(std::abs(g[i] - theta[i]) <= 1e-8);
  }
  const auto flat = numeric_gradient(
      [](std::span<const double>) { return 4.0; }, theta, 1e-5);
  for (double v : flat) CHECK(v == 0.0);

  CHECK_THROWS_AS(numeric_gradient(quad, theta, 0.0), ArgumentError);
  CHECK_THROWS_AS(
      numeric_gradient([](std::span<const double>) { return NAN; }, theta),
      NumericError);
}

TEST_CASE("relative error definition") {
  CHECK(relative_error(1.0, 1.0) == 0.0);
  CHECK(relative_error(2.0, 1.0) == 0.5);
  CHECK(relative_error(0.0, 0.0) == 0.0);
  CHECK(relative_error(1e-9, 0.0) == doctest::Approx(0.1));
}

TEST_CASE("normalization jacobian rows sum to zero") {
  Rng rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t k = 1 + rng.below(8);
    std::vector<double> w(k);
    for (double& v : w) v = rng.uniform(0.1, 1.0);
    const Matrix j = normalize_attention_jacobian(w);
    REQUIRE(j.rows() == k);
    REQUIRE(j.cols() == k);
    // Row j holds the derivatives of every normalized weight with respect
    // to raw weight j. The normalized weights always sum to one, so each
    // row sums to zero.
    for (std::size_t r = 0; r < k; ++r) {
      double row = 0.0;
      for (std::size_t c = 0; c < k; ++c) row += j(r, c);
      CHECK(std::abs(row) <= 1e-12);
    }
    // Scale invariance: moving along w itself changes nothing.
    for (std::size_t c = 0; c < k; ++c) {
      double along = 0.0;
      for (std::size_t r = 0; r < k; ++r) along += w[r] * j(r, c);
      CHECK(std::abs(along) <= 1e-12);
    }
    // Against central differences.
    for (std::size_t c = 0; c < k; ++c) {
      std::vector<double> up = w, down = w;
      up[c] += 1e-6;
      down[c] -= 1e-6;
      const auto nu = normalize_attention(up), nd = normalize_attention(down);
      for (std::size_t r = 0; r < k; ++r) {
        CHECK(j(c, r) == doctest::Approx((nu[r] - nd[r]) / 2e-6).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("analytic gradients agree with finite differences") {
  for (CellKind kind : {CellKind::kLstm, CellKind::kRra}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const GradReport r = check_gradients(small_config(kind), seed);
      CHECK(r.passed(1e-4));
      CHECK(has_block(r, "fwd.w_gates"));
      CHECK(has_block(r, "fwd.b_gates"));
      CHECK(has_block(r, "readout.w"));
      CHECK(has_block(r, "readout.b"));
      CHECK(has_block(r, "fwd.w_a") == (kind == CellKind::kRra));
    }
  }
}

TEST_CASE("gradients of token, classification and bidirectional models") {
  ModelConfig c = small_config(CellKind::kRra);
  c.vocab = 7;
  c.embedding = 3;
  c.outputs = 3;
  c.bidirectional = true;
  GradcheckOptions opt;
  opt.steps = 8;
  opt.batch = 3;
  const GradReport r = check_gradients(c, 3, opt);
  CHECK(r.passed(1e-4));
  CHECK(has_block(r, "embedding"));
  CHECK(has_block(r, "bwd.w_a"));

  ModelConfig k1 = small_config(CellKind::kRra);
  k1.window = 1;
  CHECK(check_gradients(k1, 4).passed(1e-4));
}

TEST_CASE("dropping the attention backward path is detected") {
  GradcheckOptions opt;
  opt.drop_history_gradient = true;
  const GradReport r = check_gradients(small_config(CellKind::kRra), 0, opt);
  CHECK_FALSE(r.passed(1e-4));
}

TEST_CASE("K = 1 gate gradients match the LSTM until h_{t-2} exists") {
  Rng rng(5);
  ModelConfig rra_cfg = small_config(CellKind::kRra);
  rra_cfg.window = 1;
  ModelConfig lstm_cfg = rra_cfg;
  lstm_cfg.cell = CellKind::kLstm;
  const ModelParams rp = init_model(rra_cfg, rng);
  ModelParams lp = rp;
  lp.forward_cell.w_a = Matrix();

  auto gate_grads = [&](const ModelParams& p, const ModelConfig& cfg,
                        std::size_t steps) {
    Rng data(9);
    Batch batch;
    for (std::size_t t = 0; t < steps; ++t) {
      Matrix x(3, 2);
      for (double& v : x.values()) v = data.uniform(-1.0, 1.0);
      batch.steps.push_back(x);
    }
    batch.targets = {0.4, -0.2};
    Rng unused(0);
    const ForwardResult fr = forward(p, cfg, batch, Mode::kEval, unused);
    Matrix d;
    batch_loss(fr.outputs, batch, &d);
    return backward(p, cfg, batch, fr.trace, d).forward_cell.w_gates;
  };
  CHECK(gate_grads(rp, rra_cfg, 2) == gate_grads(lp, lstm_cfg, 2));
  CHECK_FALSE(gate_grads(rp, rra_cfg, 3) == gate_grads(lp, lstm_cfg, 3));
}

TEST_CASE("report writers") {
  const GradReport r = check_gradients(small_config(CellKind::kRra), 1);
  std::ostringstream text, csv;
  write_report_text(text, r);
  write_report_csv(csv, r);
  CHECK(text.str().find("fwd.w_a") != std::string::npos);
  CHECK(csv.str().rfind("block,", 0) == 0);
  std::size_t lines = 0;
  for (char ch : csv.str()) lines += ch == '\n';
  CHECK(lines == r.blocks.size() + 1);
}

}  // namespace
}  // namespace rra
