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

// Acceptance checks for the RRA artifact. Prints one PASS/FAIL line per
// criterion and exits non-zero when any selected criterion fails.
//
// Criteria 4-7 train real models for hours. Each training run is fully
// determined by its configuration, so finished runs are kept under --runs
// and reused when the configuration matches byte for byte.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rra/attention_export.h"
#include "rra/cells.h"
#include "rra/config.h"
#include "rra/errors.h"
#include "rra/gradcheck.h"
#include "rra/initializers.h"
#include "rra/model.h"
#include "rra/optim.h"
#include "rra/rng.h"
#include "rra/trainer.h"

namespace fs = std::filesystem;
using rra::CellKind;
using rra::Matrix;
using rra::Rng;
using rra::Task;
using rra::TrainConfig;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// --- training runs ---------------------------------------------------------

struct EvalPoint {
  std::uint64_t iteration;  // completed updates
  double metric;
};

struct RunRecord {
  bool numeric_failure = false;
  std::string failure;
  std::vector<EvalPoint> evals;
  fs::path dir;
};

std::string config_text(const TrainConfig& c) {
  std::string out;
  for (const auto& [k, v] : rra::config_to_map(c)) {
    if (k == "out_dir" || k == "resume") continue;
    out += k + " = " + v + "\n";
  }
  return out;
}

std::vector<EvalPoint> read_evals(const fs::path& metrics) {
  std::ifstream in(metrics);
  std::string line;
  std::getline(in, line);
  std::vector<EvalPoint> out;
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() < 6 || f[5].empty()) continue;
    out.push_back({std::stoull(f[0]) + 1, std::stod(f[5])});
  }
  return out;
}

class RunCache {
 public:
  explicit RunCache(fs::path root) : root_(std::move(root)) {}

  RunRecord get(const std::string& name, TrainConfig config) {
    RunRecord rec;
    rec.dir = root_ / name;
    config.out_dir = rec.dir;
    const std::string text = config_text(config);
    const fs::path done = rec.dir / "config.done";
    const fs::path status = rec.dir / "status.txt";
    if (!(fs::exists(done) && slurp(done) == text)) {
      fs::remove_all(rec.dir);
      fs::create_directories(rec.dir);
      std::cerr << "  training " << name << " (" << config.iterations
                << " iterations) ..." << std::endl;
      const auto t0 = Clock::now();
      std::ofstream log(rec.dir / "train.log");
      std::string result = "ok";
      try {
        rra::run_training(config, &log);
      } catch (const rra::NumericError& e) {
        result = std::string("numeric: ") + e.what();
      }
      std::ofstream(status) << result;
      std::ofstream(done) << text;
      std::cerr << "  " << name << " done in " << fmt("%.0f", seconds_since(t0))
                << " s" << std::endl;
    }
    const std::string st = slurp(status);
    rec.numeric_failure = st != "ok";
    rec.failure = st;
    rec.evals = read_evals(rec.dir / "metrics.csv");
    return rec;
  }

 private:
  fs::path root_;
};

double best(const RunRecord& r, std::uint64_t up_to = UINT64_MAX,
            bool maximize = false) {
  double b = maximize ? -INFINITY : INFINITY;
  for (const auto& e : r.evals) {
    if (e.iteration > up_to) break;
    b = maximize ? std::max(b, e.metric) : std::min(b, e.metric);
  }
  return b;
}

std::optional<std::uint64_t> first_below(const RunRecord& r, double level) {
  for (const auto& e : r.evals) {
    if (e.metric < level) return e.iteration;
  }
  return std::nullopt;
}

bool all_finite(const RunRecord& r) {
  return std::all_of(r.evals.begin(), r.evals.end(),
                     [](const EvalPoint& e) { return std::isfinite(e.metric); });
}

std::string iters(std::optional<std::uint64_t> v) {
  return v ? std::to_string(*v) : std::string("never");
}

// --- fast criteria ---------------------------------------------------------

Outcome criterion1() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  bool ok = true;
  bool saw_wa = false;
  for (CellKind kind : {CellKind::kRra, CellKind::kLstm}) {
    rra::ModelConfig m;
    m.cell = kind;
    m.input_size = 3;
    m.hidden = 4;
    m.window = 3;
    m.outputs = 1;
    rra::GradcheckOptions opt;
    opt.steps = 12;
    opt.batch = 2;
    opt.eps = 1e-5;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const rra::GradReport r = rra::check_gradients(m, seed, opt);
      for (const auto& b : r.blocks) {
        worst = std::max(worst, b.max_relative_error);
        ok = ok && b.max_relative_error < 1e-4;
        saw_wa = saw_wa || b.name == "fwd.w_a";
      }
    }
  }
  const double secs = seconds_since(t0);
  return {ok && saw_wa && secs < 30.0,
          "gradient check, RRA and LSTM, 5 seeds: max relative error " +
              fmt("%.2e", worst) + " (< 1e-4), W_a block checked: " +
              (saw_wa ? "yes" : "no") + ", " + fmt("%.2f", secs) + " s (< 30 s)"};
}

Matrix random_matrix(std::size_t r, std::size_t c, Rng& rng) {
  Matrix m(r, c);
  for (double& v : m.values()) v = rng.uniform(-1.0, 1.0);
  return m;
}

Outcome criterion2() {
  const auto t0 = Clock::now();
  Rng rng(2);
  int step_matches = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t d = 1 + rng.below(8), h = 1 + rng.below(16);
    const std::size_t k = 1 + rng.below(10), b = 1 + rng.below(4);
    rra::CellParams p = rra::init_cell(CellKind::kRra, d, h, k, rng);
    for (double& v : p.b_gates.values()) v = rng.uniform(-1.0, 1.0);
    rra::CellParams lstm = p;
    lstm.w_a = Matrix();
    rra::RecurrentState s = rra::RecurrentState::zeros(h, b, k);
    s.h = random_matrix(h, b, rng);
    s.c = random_matrix(h, b, rng);
    rra::RecurrentState ls = s;
    ls.history.clear();
    const Matrix x = random_matrix(d, b, rng);
    const auto r = rra::rra_step(p, x, s);
    const auto l = rra::lstm_step(lstm, x, ls);
    step_matches += (r.h == l.h && r.c == l.c) ? 1 : 0;
  }

  // T = 20 unroll with the history wiped before every step.
  const std::size_t d = 3, h = 8, k = 4, b = 3, steps = 20;
  rra::CellParams p = rra::init_cell(CellKind::kRra, d, h, k, rng);
  for (double& v : p.b_gates.values()) v = rng.uniform(-1.0, 1.0);
  rra::CellParams lstm = p;
  lstm.w_a = Matrix();
  rra::RecurrentState rs = rra::RecurrentState::zeros(h, b, k);
  rra::RecurrentState ls = rra::RecurrentState::zeros(h, b, 0);
  bool unroll_match = true;
  for (std::size_t t = 0; t < steps; ++t) {
    const Matrix x = random_matrix(d, b, rng);
    rs.history = rra::RecurrentState::zeros(h, b, k).history;
    auto r = rra::rra_step(p, x, rs);
    auto l = rra::lstm_step(lstm, x, ls);
    unroll_match = unroll_match && r.h == l.h && r.c == l.c;
    rs = std::move(r.next);
    ls = rra::advance_state(ls, l.h, l.c);
  }
  const double secs = seconds_since(t0);
  return {step_matches == 100 && unroll_match && secs < 5.0,
          "zero-history RRA step equals LSTM step bitwise in " +
              std::to_string(step_matches) + "/100 configurations; T=20 "
              "unroll " + (unroll_match ? "identical" : "DIFFERS") + ", " +
              fmt("%.3f", secs) + " s (< 5 s)"};
}

Outcome criterion3() {
  int cases = 0, good = 0;
  for (std::size_t d : {1, 2, 3, 28, 128, 300}) {
    for (std::size_t h : {1, 2, 4, 32, 64, 128}) {
      for (std::size_t k : {1, 2, 3, 5, 10, 20}) {
        ++cases;
        good += rra::parameter_count(CellKind::kRra, d, h, k) -
                        rra::parameter_count(CellKind::kLstm, d, h, k) ==
                    k
                    ? 1
                    : 0;
      }
    }
  }
  const bool example = rra::parameter_count(CellKind::kLstm, 1, 2, 1) == 32 &&
                       rra::parameter_count(CellKind::kRra, 1, 2, 1) == 33;
  return {good == cases && example,
          "RRA - LSTM parameter count equals K for " + std::to_string(good) +
              "/" + std::to_string(cases) + " (D, H, K) triples"};
}

TrainConfig adding_base(std::size_t length, std::size_t hidden) {
  TrainConfig c;
  c.task = Task::kAdding;
  c.seq_length = length;
  c.hidden = hidden;
  c.batch = 50;
  return c;
}

Outcome criterion8(RunCache& cache) {
  TrainConfig c = adding_base(100, 32);
  c.window = 10;
  c.iterations = 600;
  c.eval_interval = 100;
  c.train_size = 2000;
  c.test_size = 500;
  const RunRecord run = cache.get("attention_export", c);
  if (run.numeric_failure) return {false, "run failed: " + run.failure};
  const auto table = rra::export_attention(run.dir / "metrics.csv",
                                           run.dir / "attention.csv");
  double worst = 0.0;
  for (const auto& row : table.weights) {
    double s = 0.0;
    for (double w : row) s += w;
    worst = std::max(worst, std::abs(s - 1.0));
  }
  const bool ok = table.weights.size() == c.iterations && table.window() == 10 &&
                  worst <= 1e-9;
  return {ok, "exported " + std::to_string(table.weights.size()) +
                  " attention rows (K=10) from a " +
                  std::to_string(c.iterations) +
                  "-iteration adding run; max |row sum - 1| = " +
                  fmt("%.2e", worst) + " (<= 1e-9)"};
}

Outcome criterion9(const fs::path& root) {
  TrainConfig c = adding_base(50, 16);
  c.iterations = 700;
  c.eval_interval = 100;
  c.train_size = 1000;
  c.test_size = 200;
  c.seed = 9;
  const fs::path base = root / "determinism";
  fs::remove_all(base);
  TrainConfig a = c, b = c;
  a.out_dir = base / "a";
  b.out_dir = base / "b";
  rra::run_training(a);
  rra::run_training(b);
  const bool same = slurp(a.out_dir / "metrics.csv") ==
                    slurp(b.out_dir / "metrics.csv");

  // Stop at 500, then resume from that checkpoint to the full budget.
  TrainConfig first = c;
  first.out_dir = base / "resumed";
  first.iterations = 500;
  rra::run_training(first);
  TrainConfig second = c;
  second.out_dir = base / "resumed";
  second.resume = base / "resumed" / "checkpoint.bin";
  rra::run_training(second);
  const bool resumed = slurp(a.out_dir / "metrics.csv") ==
                       slurp(second.out_dir / "metrics.csv");
  const bool ckpt = slurp(a.out_dir / "checkpoint.bin") ==
                    slurp(second.out_dir / "checkpoint.bin");
  return {same && resumed && ckpt,
          std::string("repeat run metrics ") +
              (same ? "byte-identical" : "DIFFER") +
              "; resumed-at-500 metrics " +
              (resumed ? "byte-identical" : "DIFFER") + ", final checkpoint " +
              (ckpt ? "byte-identical" : "DIFFERS")};
}

Outcome criterion10() {
  Rng rng(10);
  const std::size_t n = 50;
  Matrix m(n, n);
  for (double& v : m.values()) v = rng.normal();
  Matrix a = rra::matmul_tn(m, m);
  a *= 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) a(i, i) += 0.1;
  Matrix target(n, 1);
  for (double& v : target.values()) v = rng.uniform(-1.0, 1.0);
  auto residual = [&](const Matrix& th) {
    Matrix d = th;
    for (std::size_t i = 0; i < n; ++i) d[i] -= target[i];
    return d;
  };
  auto loss = [&](const Matrix& th) {
    const Matrix d = residual(th);
    return 0.5 * rra::dot(d, rra::matmul(a, d));
  };
  auto reduction = [&](rra::OptimizerConfig cfg) {
    Matrix theta(n, 1);
    Matrix* params[] = {&theta};
    const Matrix* view[] = {&theta};
    rra::OptimState st = rra::make_optim_state(cfg, view);
    const double l0 = loss(theta);
    for (int s = 0; s < 500; ++s) {
      const Matrix g = rra::matmul(a, residual(theta));
      const Matrix* grads[] = {&g};
      rra::optimizer_step(st, params, grads);
    }
    return l0 / loss(theta);
  };
  rra::OptimizerConfig ada;
  ada.kind = rra::OptimizerKind::kAdadelta;
  rra::OptimizerConfig rms;
  rms.kind = rra::OptimizerKind::kRmsprop;
  rms.learning_rate = 1e-2;
  const double ra = reduction(ada), rr = reduction(rms);

  int activations = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    Matrix g1(1 + rng.below(30), 1 + rng.below(30)), g2(1 + rng.below(10), 3);
    const double scale = std::exp(rng.uniform(-3.0, 15.0));
    for (double& v : g1.values()) v = scale * rng.normal();
    for (double& v : g2.values()) v = scale * rng.normal();
    Matrix* grads[] = {&g1, &g2};
    const Matrix* view[] = {&g1, &g2};
    if (rra::clip_gradients(grads, 1.0) > 1.0) {
      ++activations;
      worst = std::max(worst, rra::global_norm(view));
    }
  }
  return {ra >= 10.0 && rr >= 10.0 && worst <= 1.0 + 1e-12 && activations > 0,
          "500 steps on a 50-dim PSD quadratic: ADADELTA loss / " +
              fmt("%.3g", ra) + ", RMSprop (lr 1e-2) loss / " +
              fmt("%.3g", rr) + " (>= 10x); clipping active in " +
              std::to_string(activations) + "/1000 draws, max post-clip norm " +
              fmt("%.17g", worst)};
}

// --- slow criteria ---------------------------------------------------------

constexpr std::uint64_t kSeeds[] = {0, 1, 2};

Outcome criterion4(RunCache& cache) {
  int passing = 0, rra_faster = 0;
  std::string detail;
  for (std::uint64_t seed : kSeeds) {
    TrainConfig c = adding_base(100, 64);
    c.optimizer = rra::OptimizerKind::kAdadelta;
    c.train_size = 10000;
    c.test_size = 2000;
    c.iterations = 6000;
    c.eval_interval = 100;
    c.seed = seed;
    const RunRecord r = cache.get("adding100_rra_s" + std::to_string(seed), c);
    TrainConfig lc = c;
    lc.cell = CellKind::kLstm;
    const RunRecord l = cache.get("adding100_lstm_s" + std::to_string(seed), lc);
    const auto rb = first_below(r, 0.167), lb = first_below(l, 0.167);
    const double final_mse = r.evals.empty() ? INFINITY : r.evals.back().metric;
    const bool ok = !r.numeric_failure && rb.has_value() && final_mse < 0.05;
    passing += ok;
    rra_faster += rb && (!lb || *rb < *lb);
    detail += " seed " + std::to_string(seed) + ": RRA below 0.167 at " +
              iters(rb) + ", final " + fmt("%.4f", final_mse) +
              " (LSTM below at " + iters(lb) + ", final " +
              fmt("%.4f", l.evals.empty() ? NAN : l.evals.back().metric) +
              ");";
  }
  return {passing >= 2,
          "adding S=100: " + std::to_string(passing) +
              "/3 seeds reach MSE < 0.167 within 6000 iterations and end "
              "< 0.05;" + detail + " soft trend (RRA beats baseline first): " +
              std::to_string(rra_faster) + "/3 " +
              (rra_faster >= 2 ? "holds" : "does not hold")};
}

Outcome criterion5(RunCache& cache) {
  int wins = 0;
  bool stable = true;
  std::string detail;
  for (std::uint64_t seed : kSeeds) {
    TrainConfig c = adding_base(500, 64);
    c.optimizer = rra::OptimizerKind::kAdadelta;
    c.train_size = 10000;
    c.test_size = 2000;
    c.iterations = 8000;
    c.eval_interval = 200;
    c.seed = seed;
    const RunRecord r = cache.get("adding500_rra_s" + std::to_string(seed), c);
    TrainConfig lc = c;
    lc.cell = CellKind::kLstm;
    const RunRecord l = cache.get("adding500_lstm_s" + std::to_string(seed), lc);
    const bool finite = !r.numeric_failure && all_finite(r) &&
                        r.evals.size() == c.iterations / c.eval_interval;
    stable = stable && finite;
    const double rb = best(r), lb = best(l);
    wins += finite && rb <= lb;
    detail += " seed " + std::to_string(seed) + ": best RRA " +
              fmt("%.6f", rb) + " vs LSTM " + fmt("%.6f", lb) +
              (finite ? "" : " (RRA diverged)") + ";";
  }
  return {stable && wins >= 2,
          "adding S=500, 8000 iterations: RRA non-divergent on all seeds: " +
              std::string(stable ? "yes" : "NO") + "; best RRA <= best LSTM on " +
              std::to_string(wins) + "/3 seeds;" + detail};
}

Outcome criterion6(RunCache& cache, const fs::path& mnist_dir) {
  TrainConfig base;
  base.mnist_train_images = mnist_dir / "train-images-idx3-ubyte";
  base.mnist_train_labels = mnist_dir / "train-labels-idx1-ubyte";
  base.mnist_test_images = mnist_dir / "t10k-images-idx3-ubyte";
  base.mnist_test_labels = mnist_dir / "t10k-labels-idx1-ubyte";
  for (const auto& p : {base.mnist_train_images, base.mnist_train_labels,
                        base.mnist_test_images, base.mnist_test_labels}) {
    if (!fs::exists(p)) {
      return {false, "MNIST IDX files not found in " + mnist_dir.string() +
                         " (see tools/make_mnist_subset.py)"};
    }
  }
  // The available sample holds 500 images per class: 3000 train / 2000 test.
  base.train_size = 3000;
  base.test_size = 2000;
  base.downsample = 2;
  base.hidden = 96;
  base.batch = 50;
  base.optimizer = rra::OptimizerKind::kRmsprop;
  base.iterations = 8000;
  base.eval_interval = 500;
  int normal_ok = 0, permuted_ok = 0, beats = 0;
  std::string detail;
  for (std::uint64_t seed : kSeeds) {
    TrainConfig n = base;
    n.task = Task::kMnist;
    n.seed = seed;
    TrainConfig p = base;
    p.task = Task::kMnistPermuted;
    p.seed = seed;
    TrainConfig lp = p;
    lp.cell = CellKind::kLstm;
    const std::string s = std::to_string(seed);
    const RunRecord rn = cache.get("mnist_rra_s" + s, n);
    const RunRecord rp = cache.get("mnist_perm_rra_s" + s, p);
    const RunRecord lpr = cache.get("mnist_perm_lstm_s" + s, lp);
    auto final_acc = [](const RunRecord& r) {
      return r.evals.empty() ? 0.0 : r.evals.back().metric;
    };
    const double an = final_acc(rn), ap = final_acc(rp), al = final_acc(lpr);
    normal_ok += an >= 0.85;
    permuted_ok += ap >= 0.75;
    beats += ap >= al;
    detail += " seed " + s + ": RRA " + fmt("%.2f%%", 100 * an) + " normal, " +
              fmt("%.2f%%", 100 * ap) + " permuted, LSTM permuted " +
              fmt("%.2f%%", 100 * al) + ";";
  }
  return {normal_ok >= 2 && permuted_ok >= 2 && beats >= 2,
          "DESK-SCALE MNIST 14x14, 3000 train / 2000 test, 8000 iterations: "
          "RRA >= 85% normal on " + std::to_string(normal_ok) +
              "/3, >= 75% permuted on " + std::to_string(permuted_ok) +
              "/3, RRA permuted >= LSTM permuted on " + std::to_string(beats) +
              "/3;" + detail};
}

Outcome criterion7(RunCache& cache) {
  TrainConfig c;
  c.task = Task::kLongrange;
  c.seq_length = 120;
  c.gap = 60;
  c.vocab = 50;
  c.embedding = 32;
  c.hidden = 32;
  c.window = 5;
  c.batch = 50;
  c.train_size = 8000;
  c.test_size = 2000;
  c.iterations = 5000;
  c.eval_interval = 100;
  c.seed = 0;
  const RunRecord r = cache.get("longrange_rra_s0", c);
  const double acc = best(r, 5000, true);
  std::optional<std::uint64_t> reached;
  for (const auto& e : r.evals) {
    if (e.metric >= 0.95) {
      reached = e.iteration;
      break;
    }
  }
  return {!r.numeric_failure && acc >= 0.95,
          "long-range T=120, gap 60, V=50: best RRA test accuracy " +
              fmt("%.2f%%", 100 * acc) + " within 5000 iterations (>= 95%), "
              "first reached at iteration " + iters(reached)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RRA acceptance checks"};
  std::vector<int> selected{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  fs::path runs = "acceptance_runs";
  fs::path mnist = "mnist";
  std::vector<int> known;
  app.add_option("--criteria", selected, "criteria to check")->delimiter(',');
  app.add_option("--runs", runs, "directory for cached training runs");
  app.add_option("--mnist-dir", mnist, "directory with MNIST IDX files");
  app.add_option("--known-failure", known,
                 "criteria whose FAIL is documented and not an error")
      ->delimiter(',');
  CLI11_PARSE(app, argc, argv);

  fs::create_directories(runs);
  RunCache cache(runs);
  const std::map<int, std::function<Outcome()>> checks = {
      {1, [] { return criterion1(); }},
      {2, [] { return criterion2(); }},
      {3, [] { return criterion3(); }},
      {4, [&] { return criterion4(cache); }},
      {5, [&] { return criterion5(cache); }},
      {6, [&] { return criterion6(cache, mnist); }},
      {7, [&] { return criterion7(cache); }},
      {8, [&] { return criterion8(cache); }},
      {9, [&] { return criterion9(runs); }},
      {10, [] { return criterion10(); }},
  };

  int failures = 0;
  std::ofstream report(runs / "report.txt", std::ios::app);
  for (int id : selected) {
    const auto it = checks.find(id);
    if (it == checks.end()) {
      std::cerr << "unknown criterion " << id << "\n";
      return 1;
    }
    Outcome out;
    try {
      out = it->second();
    } catch (const std::exception& e) {
      out = {false, std::string("error: ") + e.what()};
    }
    const bool is_known =
        std::find(known.begin(), known.end(), id) != known.end();
    failures += !out.pass && !is_known;
    std::string line = std::string(out.pass ? "PASS" : "FAIL") +
                       " criterion " + std::to_string(id) + ": " + out.detail;
    if (!out.pass && is_known) line += " [known failure, see README]";
    std::cout << line << std::endl;
    report << line << "\n";
  }
  return failures == 0 ? 0 : 1;
}
