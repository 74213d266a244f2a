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

// Command-line front end: train, eval, gradcheck, gen-data, export-attention.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rra/attention_export.h"
#include "rra/checkpoint.h"
#include "rra/config.h"
#include "rra/dataset_io.h"
#include "rra/errors.h"
#include "rra/gradcheck.h"
#include "rra/trainer.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumeric = 3;

// Flags shared by train and eval. Unset flags leave file values alone.
struct RunFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> task;
  std::optional<std::string> cell;
  std::optional<std::size_t> k;
  std::optional<std::size_t> hidden;
  std::optional<std::size_t> iters;
  std::optional<std::string> out;
  std::vector<std::string> set;

  void add_to(CLI::App* app) {
    app->add_option("--config", config, "key = value config file");
    app->add_option("--seed", seed, "run seed");
    app->add_option("--task", task,
                    "adding|mnist|mnist-permuted|text|longrange");
    app->add_option("--cell", cell, "lstm|rra");
    app->add_option("--k", k, "attention window K");
    app->add_option("--hidden", hidden, "hidden size H");
    app->add_option("--iters", iters, "training iterations");
    app->add_option("--out", out, "output directory");
    app->add_option("--set", set, "extra key=value overrides")
        ->take_all();
  }

  rra::TrainConfig resolve() const {
    rra::TrainConfig cfg;
    if (!config.empty()) cfg = rra::load_config_file(config);
    for (const auto& kv : set) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) {
        throw rra::ArgumentError("--set expects key=value, got '" + kv + "'");
      }
      rra::set_config_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (seed) cfg.seed = *seed;
    if (task) cfg.task = rra::parse_task(*task);
    if (cell) cfg.cell = rra::parse_cell_kind(*cell);
    if (k) cfg.window = *k;
    if (hidden) cfg.hidden = *hidden;
    if (iters) cfg.iterations = *iters;
    if (out) cfg.out_dir = *out;
    cfg.validate();
    return cfg;
  }
};

int cmd_train(const RunFlags& flags, const std::string& resume) {
  rra::TrainConfig cfg = flags.resolve();
  if (!resume.empty()) cfg.resume = resume;
  const rra::TrainResult r = rra::run_training(cfg, &std::cout);
  std::cout << "final eval_loss " << r.final_eval.loss << " eval_metric "
            << r.final_eval.metric << "\ncheckpoint " << r.checkpoint.string()
            << "\nmetrics " << r.metrics.string() << "\n";
  return kExitOk;
}

int cmd_eval(const RunFlags& flags, const std::string& checkpoint,
             const std::string& split) {
  const rra::TrainConfig cfg = flags.resolve();
  const rra::Checkpoint ckpt = rra::load_checkpoint(checkpoint);
  const rra::TaskData data = rra::load_task_data(cfg);
  const rra::Dataset& set = split == "train" ? *data.train : *data.eval;
  const rra::EvalMetrics m = rra::evaluate(ckpt, set, cfg.eval_batch);
  std::cout.precision(17);
  std::cout << "examples " << m.count << "\nloss " << m.loss << "\nmetric "
            << m.metric << "\n";
  return kExitOk;
}

struct GradFlags {
  std::string cell = "rra";
  std::size_t input = 3;
  std::size_t hidden = 4;
  std::size_t k = 3;
  std::size_t outputs = 1;
  std::size_t vocab = 0;
  std::size_t embedding = 0;
  bool bidirectional = false;
  rra::GradcheckOptions options;
  std::vector<std::uint64_t> seeds{0};
  double tolerance = 1e-4;
  std::string csv;
};

int cmd_gradcheck(const GradFlags& g) {
  rra::ModelConfig model;
  model.cell = rra::parse_cell_kind(g.cell);
  model.bidirectional = g.bidirectional;
  model.input_size = g.input;
  model.hidden = g.hidden;
  model.window = g.k;
  model.outputs = g.outputs;
  model.vocab = g.vocab;
  model.embedding = g.embedding;
  model.validate();
  std::ofstream csv;
  if (!g.csv.empty()) {
    csv.open(g.csv);
    if (!csv) throw rra::DataError("cannot write " + g.csv);
  }
  bool ok = true;
  for (std::uint64_t seed : g.seeds) {
    const rra::GradReport report = rra::check_gradients(model, seed, g.options);
    std::cout << "seed " << seed << "\n";
    rra::write_report_text(std::cout, report);
    if (csv.is_open()) rra::write_report_csv(csv, report);
    ok = ok && report.passed(g.tolerance);
  }
  std::cout << (ok ? "PASS" : "FAIL") << " (tolerance " << g.tolerance << ")\n";
  return ok ? kExitOk : kExitNumeric;
}

struct GenFlags {
  std::string task = "adding";
  std::size_t count = 100;
  std::size_t length = 100;
  std::size_t gap = 60;
  std::size_t vocab = 50;
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "bin";
};

int cmd_gen_data(const GenFlags& g) {
  rra::Rng rng = rra::Rng(g.seed).split("gen-data");
  const bool csv = g.format == "csv";
  if (g.format != "bin" && !csv) {
    throw rra::ArgumentError("--format must be bin or csv");
  }
  if (!csv && g.out.empty()) {
    throw rra::ArgumentError("binary output needs --out");
  }
  std::ofstream file;
  if (csv && !g.out.empty()) {
    file.open(g.out);
    if (!file) throw rra::DataError("cannot write " + g.out);
  }
  std::ostream& os = file.is_open() ? file : std::cout;
  const rra::Task task = rra::parse_task(g.task);
  if (task == rra::Task::kAdding) {
    const auto data = rra::gen_adding(g.length, g.count, rng);
    if (csv) rra::write_adding_csv(os, data);
    else rra::write_adding_dataset(g.out, data);
  } else if (task == rra::Task::kLongrange) {
    const auto data =
        rra::gen_longrange_text(g.count, g.length, g.gap, g.vocab, rng);
    if (csv) rra::write_token_csv(os, data);
    else rra::write_token_dataset(g.out, data);
  } else {
    throw rra::ArgumentError("gen-data supports adding and longrange");
  }
  return kExitOk;
}

int cmd_export_attention(const std::string& metrics, const std::string& out) {
  if (out.empty()) {
    rra::write_attention_csv(rra::read_attention(metrics), std::cout);
  } else {
    rra::export_attention(metrics, out);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Recurrent residual attention networks"};
  app.require_subcommand(1);

  RunFlags train_flags;
  std::string resume;
  CLI::App* train = app.add_subcommand("train", "train a model");
  train_flags.add_to(train);
  train->add_option("--resume", resume, "checkpoint to resume from");

  RunFlags eval_flags;
  std::string checkpoint;
  std::string split = "eval";
  CLI::App* eval = app.add_subcommand("eval", "evaluate a checkpoint");
  eval_flags.add_to(eval);
  eval->add_option("--checkpoint", checkpoint)->required();
  eval->add_option("--split", split)->check(CLI::IsMember({"train", "eval"}));

  GradFlags grad;
  CLI::App* gc = app.add_subcommand("gradcheck", "finite-difference check");
  gc->add_option("--cell", grad.cell);
  gc->add_option("--input", grad.input, "input features D");
  gc->add_option("--hidden", grad.hidden);
  gc->add_option("--k", grad.k);
  gc->add_option("--outputs", grad.outputs);
  gc->add_option("--vocab", grad.vocab);
  gc->add_option("--embedding", grad.embedding);
  gc->add_flag("--bidirectional", grad.bidirectional);
  gc->add_option("--steps", grad.options.steps);
  gc->add_option("--batch", grad.options.batch);
  gc->add_option("--eps", grad.options.eps);
  gc->add_option("--seed", grad.seeds, "one or more seeds")->take_all();
  gc->add_option("--tolerance", grad.tolerance);
  gc->add_option("--csv", grad.csv, "also write the report as CSV");

  GenFlags gen;
  CLI::App* gd = app.add_subcommand("gen-data", "write a synthetic dataset");
  gd->add_option("--task", gen.task, "adding|longrange");
  gd->add_option("--count", gen.count);
  gd->add_option("--length", gen.length);
  gd->add_option("--gap", gen.gap);
  gd->add_option("--vocab", gen.vocab);
  gd->add_option("--seed", gen.seed);
  gd->add_option("--out", gen.out);
  gd->add_option("--format", gen.format, "bin|csv");

  std::string metrics_path;
  std::string attention_out;
  CLI::App* ea = app.add_subcommand("export-attention",
                                    "normalized attention weights per row");
  ea->add_option("metrics", metrics_path, "metrics.csv")->required();
  ea->add_option("--out", attention_out, "output CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*train) return cmd_train(train_flags, resume);
    if (*eval) return cmd_eval(eval_flags, checkpoint, split);
    if (*gc) return cmd_gradcheck(grad);
    if (*gd) return cmd_gen_data(gen);
    if (*ea) return cmd_export_attention(metrics_path, attention_out);
  } catch (const rra::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const rra::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
