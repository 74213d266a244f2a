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

#include "rra/trainer.h"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>

#ifdef __GLIBC__
#include <malloc.h>
#endif

#include "rra/errors.h"
#include "rra/optim.h"

namespace rra {

namespace {

std::vector<PixelSequence> to_sequences(const MnistSet& set,
                                        std::span<const std::size_t> indices,
                                        std::span<const std::uint32_t> perm,
                                        std::size_t downsample) {
  std::vector<PixelSequence> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) {
    out.push_back(pixels_to_sequence(set.image(i), set.rows, set.cols,
                                     set.labels[i], perm, downsample));
  }
  return out;
}

std::vector<Matrix*> pointers(ModelParams& p) {
  std::vector<Matrix*> out;
  for (auto& b : p.blocks()) out.push_back(b.value);
  return out;
}

std::vector<const Matrix*> const_pointers(ModelParams& p) {
  std::vector<const Matrix*> out;
  for (auto& b : p.blocks()) out.push_back(b.value);
  return out;
}

bool same_model(const ModelConfig& a, const ModelConfig& b) {
  return a.cell == b.cell && a.bidirectional == b.bidirectional &&
         a.input_size == b.input_size && a.vocab == b.vocab &&
         a.embedding == b.embedding && a.hidden == b.hidden &&
         a.cell_window() == b.cell_window() && a.outputs == b.outputs;
}

// The per-step caches of a training iteration are freed and reallocated
// every iteration; keep them in the heap instead of returning the pages to
// the kernel each time (otherwise page faults cost ~30% of a run).
void keep_heap_pages() {
#ifdef __GLIBC__
  mallopt(M_MMAP_THRESHOLD, 256 << 20);
  mallopt(M_TRIM_THRESHOLD, 1 << 30);
#endif
}

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

TaskData load_task_data(const TrainConfig& config) {
  TaskData data;
  ModelConfig& m = data.model;
  m.cell = config.cell;
  m.bidirectional = config.bidirectional;
  m.hidden = config.hidden;
  m.window = config.window;
  m.dropout = config.dropout;

  const Rng root(config.seed);
  Rng train_rng = root.split("train-data");
  Rng eval_rng = root.split("eval-data");

  switch (config.task) {
    case Task::kAdding: {
      m.input_size = 2;
      m.outputs = 1;
      data.train = std::make_unique<AddingDataset>(
          gen_adding(config.seq_length, config.train_size, train_rng));
      data.eval = std::make_unique<AddingDataset>(
          gen_adding(config.seq_length, config.test_size, eval_rng));
      break;
    }
    case Task::kLongrange: {
      m.vocab = config.vocab;
      m.embedding = config.embedding;
      m.outputs = 2;
      data.train = std::make_unique<TokenDataset>(gen_longrange_text(
          config.train_size, config.seq_length, config.gap, config.vocab,
          train_rng));
      data.eval = std::make_unique<TokenDataset>(gen_longrange_text(
          config.test_size, config.seq_length, config.gap, config.vocab,
          eval_rng));
      break;
    }
    case Task::kMnist:
    case Task::kMnistPermuted: {
      if (config.mnist_train_images.empty() || config.mnist_test_images.empty()) {
        throw DataError("mnist task needs mnist_train_* and mnist_test_* paths");
      }
      const MnistSet train = load_mnist_idx(config.mnist_train_images,
                                            config.mnist_train_labels);
      const MnistSet test = load_mnist_idx(config.mnist_test_images,
                                           config.mnist_test_labels);
      const std::size_t steps = (train.rows / config.downsample) *
                                (train.cols / config.downsample);
      std::vector<std::uint32_t> perm;
      if (config.task == Task::kMnistPermuted) {
        perm = make_permutation(config.permutation_seed, steps);
      }
      const auto train_idx =
          stratified_subset(train.labels, config.train_size, train_rng);
      const auto test_idx =
          stratified_subset(test.labels, config.test_size, eval_rng);
      m.input_size = 1;
      m.outputs = 10;
      data.train = std::make_unique<PixelDataset>(
          to_sequences(train, train_idx, perm, config.downsample));
      data.eval = std::make_unique<PixelDataset>(
          to_sequences(test, test_idx, perm, config.downsample));
      break;
    }
    case Task::kText: {
      if (config.text_train.empty() || config.text_test.empty()) {
        throw DataError("text task needs text_train and text_test paths");
      }
      const auto train_docs = read_labeled_text(config.text_train);
      const auto test_docs = read_labeled_text(config.text_test);
      std::vector<std::vector<std::string>> corpus;
      for (const auto& [label, text] : train_docs) corpus.push_back(tokenize(text));
      const Vocabulary vocab = Vocabulary::build(corpus, config.vocab);
      auto train = encode_labeled_text(train_docs, vocab, config.max_length);
      auto test = encode_labeled_text(test_docs, vocab, config.max_length);
      if (config.train_size < train.size()) train.resize(config.train_size);
      if (config.test_size < test.size()) test.resize(config.test_size);
      m.vocab = vocab.size();
      m.embedding = config.embedding;
      m.outputs = 2;
      data.train = std::make_unique<TokenDataset>(std::move(train));
      data.eval = std::make_unique<TokenDataset>(std::move(test));
      break;
    }
  }
  m.validate();
  return data;
}

std::string metrics_header(std::size_t window) {
  std::string h =
      "iteration,epoch,seconds,train_loss,eval_loss,eval_metric,grad_norm";
  for (std::size_t k = 0; k < window; ++k) h += ",attn_" + std::to_string(k);
  return h;
}

std::string format_metrics_row(const MetricsRow& row) {
  std::ostringstream os;
  os << row.iteration << "," << row.epoch << "," << format_double(row.seconds)
     << "," << format_double(row.train_loss) << ","
     << (row.eval_loss ? format_double(*row.eval_loss) : "") << ","
     << (row.eval_metric ? format_double(*row.eval_metric) : "") << ","
     << format_double(row.grad_norm);
  for (double w : row.attention) os << "," << format_double(w);
  return os.str();
}

EvalMetrics evaluate(const ModelParams& params, const ModelConfig& model,
                     const Dataset& data, std::size_t batch_size) {
  if (data.size() == 0) throw DataError("evaluate: empty dataset");
  if (batch_size == 0) throw ArgumentError("evaluate: batch size must be > 0");
  double loss_total = 0.0;
  double metric_total = 0.0;
  bool classification = false;
  for (std::size_t start = 0; start < data.size(); start += batch_size) {
    const std::size_t n = std::min(batch_size, data.size() - start);
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), start);
    const Batch batch = data.batch(idx);
    const Matrix outputs = predict(params, model, batch);
    classification = batch.classification();
    // Per-example sums in example order, so the result does not depend on
    // how the dataset is split into batches.
    for (std::size_t b = 0; b < n; ++b) {
      if (classification) {
        const Matrix logits = outputs.col(b);
        const int label[1] = {batch.labels[b]};
        loss_total += loss_cross_entropy(logits, label);
        metric_total += accuracy(logits, label);
      } else {
        const double d = outputs[b] - batch.targets[b];
        loss_total += d * d;
      }
    }
  }
  EvalMetrics m;
  m.count = data.size();
  m.loss = loss_total / static_cast<double>(m.count);
  m.metric = classification ? metric_total / static_cast<double>(m.count)
                            : m.loss;
  return m;
}

EvalMetrics evaluate(const Checkpoint& ckpt, const Dataset& data,
                     std::size_t batch_size) {
  return evaluate(ckpt.params, ckpt.model, data, batch_size);
}

TrainResult run_training(const TrainConfig& config, std::ostream* log) {
  namespace fs = std::filesystem;
  using Clock = std::chrono::steady_clock;
  config.validate();
  keep_heap_pages();
  const TaskData data = load_task_data(config);
  const ModelConfig& model = data.model;
  fs::create_directories(config.out_dir);

  Checkpoint state;
  if (!config.resume.empty()) {
    state = load_checkpoint(config.resume);
    if (!same_model(state.model, model)) {
      throw ArgumentError("resume: checkpoint model does not match config");
    }
    if (state.optim.config.kind != config.optimizer_kind()) {
      throw ArgumentError("resume: checkpoint optimizer does not match config");
    }
    state.model = model;
  } else {
    Rng init_rng = Rng(config.seed).split("init");
    state.model = model;
    state.params = init_model(model, init_rng);
    state.optim = make_optim_state(config.optimizer_config(),
                                   const_pointers(state.params));
  }
  const std::uint64_t start = state.iteration;
  const bool mnist =
      config.task == Task::kMnist || config.task == Task::kMnistPermuted;
  if (mnist && log != nullptr &&
      (config.downsample > 1 || config.train_size < 60000)) {
    *log << "DESK-SCALE MNIST: " << data.train->size() << " train / "
         << data.eval->size() << " test images, downsample "
         << config.downsample << "; not comparable to full-scale results"
         << std::endl;
  }
  if (start > config.iterations) {
    throw ArgumentError("resume: checkpoint is past the iteration budget");
  }

  TrainResult result;
  result.metrics = config.out_dir / "metrics.csv";
  result.checkpoint = config.out_dir / "checkpoint.bin";
  const std::size_t window =
      model.cell == CellKind::kRra ? model.window : 0;

  // On resume keep rows written before the checkpoint and drop the rest.
  std::vector<std::string> kept;
  if (start > 0 && fs::exists(result.metrics)) {
    std::ifstream in(result.metrics);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
      if (!line.empty() && std::stoull(line.substr(0, line.find(','))) < start) {
        kept.push_back(line);
      }
    }
  }
  std::ofstream metrics(result.metrics, std::ios::trunc);
  if (!metrics) throw DataError("cannot write " + result.metrics.string());
  metrics << metrics_header(window) << "\n";
  for (const auto& line : kept) metrics << line << "\n";

  std::ofstream timing(config.out_dir / "timing.csv",
                       start > 0 ? std::ios::app : std::ios::trunc);
  if (start == 0) timing << "epoch,iterations,seconds\n";

  const Dataset& train = *data.train;
  const std::size_t batches_per_epoch = train.size() / config.batch;
  const Rng root(config.seed);
  const Rng shuffle_root = root.split("shuffle");
  const Rng dropout_root = root.split("dropout");
  std::vector<std::size_t> order(train.size());
  std::uint64_t cached_epoch = UINT64_MAX;

  std::vector<Matrix*> params = pointers(state.params);
  const auto run_start = Clock::now();
  auto epoch_start = run_start;
  std::uint64_t epoch_iterations = 0;

  for (std::uint64_t it = start; it < config.iterations; ++it) {
    const std::uint64_t epoch = it / batches_per_epoch;
    if (epoch != cached_epoch) {
      if (cached_epoch != UINT64_MAX && epoch_iterations > 0) {
        const double secs =
            std::chrono::duration<double>(Clock::now() - epoch_start).count();
        timing << cached_epoch << "," << epoch_iterations << "," << secs << "\n";
      }
      epoch_start = Clock::now();
      epoch_iterations = 0;
      std::iota(order.begin(), order.end(), 0);
      shuffle_root.split(epoch).shuffle(std::span<std::size_t>(order));
      cached_epoch = epoch;
    }
    const std::size_t slot = it % batches_per_epoch;
    const Batch batch = train.batch(
        std::span<const std::size_t>(order).subspan(slot * config.batch,
                                                     config.batch));

    MetricsRow row;
    row.iteration = it;
    row.epoch = epoch;
    if (window > 0) {
      row.attention = normalize_attention(state.params.forward_cell.w_a.values());
    }
    Rng dropout_rng = dropout_root.split(it);
    const ForwardResult fwd =
        forward(state.params, model, batch, Mode::kTrain, dropout_rng);
    Matrix d_out;
    row.train_loss = batch_loss(fwd.outputs, batch, &d_out);
    if (!std::isfinite(row.train_loss)) {
      throw NumericError("non-finite training loss at iteration " +
                         std::to_string(it));
    }
    ModelParams grads = backward(state.params, model, batch, fwd.trace, d_out);
    std::vector<Matrix*> grad_ptrs = pointers(grads);
    row.grad_norm = clip_gradients(grad_ptrs, config.clip);
    if (!std::isfinite(row.grad_norm)) {
      throw NumericError("non-finite gradient at iteration " +
                         std::to_string(it));
    }
    optimizer_step(state.optim, params, const_pointers(grads));
    state.iteration = it + 1;
    ++epoch_iterations;

    const bool eval_now =
        (it + 1) % config.eval_interval == 0 || it + 1 == config.iterations;
    if (eval_now) {
      const EvalMetrics ev =
          evaluate(state.params, model, *data.eval, config.eval_batch);
      row.eval_loss = ev.loss;
      row.eval_metric = ev.metric;
      result.final_eval = ev;
    }
    if (config.record_wallclock) {
      row.seconds =
          std::chrono::duration<double>(Clock::now() - run_start).count();
    }
    metrics << format_metrics_row(row) << "\n";
    if (eval_now) {
      metrics.flush();
      if (log != nullptr) {
        *log << "iter " << it + 1 << " train_loss " << row.train_loss
             << " eval_loss " << *row.eval_loss << " eval_metric "
             << *row.eval_metric << std::endl;
      }
    }
    if (config.checkpoint_interval > 0 &&
        (it + 1) % config.checkpoint_interval == 0) {
      save_checkpoint(state, config.out_dir / ("checkpoint_" +
                                               std::to_string(it + 1) + ".bin"));
    }
    result.last = row;
  }
  if (epoch_iterations > 0) {
    const double secs =
        std::chrono::duration<double>(Clock::now() - epoch_start).count();
    timing << cached_epoch << "," << epoch_iterations << "," << secs << "\n";
  }
  metrics.flush();
  save_checkpoint(state, result.checkpoint);
  return result;
}

}  // namespace rra
