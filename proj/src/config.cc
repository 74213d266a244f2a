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

#include "rra/config.h"

#include <charconv>
#include <fstream>
#include <sstream>

#include "rra/errors.h"

namespace rra {

std::string_view to_string(Task task) {
  switch (task) {
    case Task::kAdding: return "adding";
    case Task::kMnist: return "mnist";
    case Task::kMnistPermuted: return "mnist-permuted";
    case Task::kText: return "text";
    case Task::kLongrange: return "longrange";
  }
  return "?";
}

Task parse_task(std::string_view name) {
  for (Task t : {Task::kAdding, Task::kMnist, Task::kMnistPermuted, Task::kText,
                 Task::kLongrange}) {
    if (name == to_string(t)) return t;
  }
  throw ArgumentError("unknown task '" + std::string(name) + "'");
}

OptimizerKind TrainConfig::optimizer_kind() const {
  if (optimizer) return *optimizer;
  return task == Task::kMnist || task == Task::kMnistPermuted
             ? OptimizerKind::kRmsprop
             : OptimizerKind::kAdadelta;
}

OptimizerConfig TrainConfig::optimizer_config() const {
  OptimizerConfig c;
  c.kind = optimizer_kind();
  c.rho = rho;
  c.epsilon = epsilon;
  c.decay = decay;
  c.learning_rate = learning_rate;
  return c;
}

void TrainConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ArgumentError("config: " + msg); };
  if (cell == CellKind::kRra && window < 1) fail("k must be >= 1");
  if (batch < 1) fail("batch must be >= 1");
  if (eval_batch < 1) fail("eval_batch must be >= 1");
  if (hidden < 1) fail("hidden must be >= 1");
  if (eval_interval < 1) fail("eval_interval must be >= 1");
  if (!(clip > 0.0)) fail("clip must be positive");
  if (!(dropout >= 0.0 && dropout < 1.0)) fail("dropout must be in [0, 1)");
  if (train_size < batch) fail("train_size must be at least one batch");
  if (test_size < 1) fail("test_size must be >= 1");
  if (downsample < 1) fail("downsample must be >= 1");
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw ArgumentError("config: bad value '" + std::string(value) +
                        "' for " + std::string(key));
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "1" || value == "true" || value == "yes") return true;
  if (value == "0" || value == "false" || value == "no") return false;
  throw ArgumentError("config: bad boolean '" + std::string(value) +
                      "' for " + std::string(key));
}

}  // namespace

void set_config_value(TrainConfig& c, std::string_view raw_key,
                      std::string_view value) {
  std::string key(raw_key);
  for (char& ch : key) {
    if (ch == '-') ch = '_';
  }
  auto size = [&] { return parse_number<std::size_t>(key, value); };
  auto real = [&] { return parse_number<double>(key, value); };
  auto u64 = [&] { return parse_number<std::uint64_t>(key, value); };

  if (key == "task") c.task = parse_task(value);
  else if (key == "cell") c.cell = parse_cell_kind(value);
  else if (key == "bidirectional") c.bidirectional = parse_bool(key, value);
  else if (key == "seq_length" || key == "length") c.seq_length = size();
  else if (key == "hidden") c.hidden = size();
  else if (key == "embedding") c.embedding = size();
  else if (key == "k" || key == "window") c.window = size();
  else if (key == "batch") c.batch = size();
  else if (key == "eval_batch") c.eval_batch = size();
  else if (key == "optimizer") c.optimizer = parse_optimizer_kind(value);
  else if (key == "rho") c.rho = real();
  else if (key == "epsilon") c.epsilon = real();
  else if (key == "decay") c.decay = real();
  else if (key == "learning_rate" || key == "lr") c.learning_rate = real();
  else if (key == "clip") c.clip = real();
  else if (key == "dropout") c.dropout = real();
  else if (key == "seed") c.seed = u64();
  else if (key == "iterations" || key == "iters") c.iterations = size();
  else if (key == "eval_interval") c.eval_interval = size();
  else if (key == "checkpoint_interval") c.checkpoint_interval = size();
  else if (key == "record_wallclock") c.record_wallclock = parse_bool(key, value);
  else if (key == "train_size") c.train_size = size();
  else if (key == "test_size") c.test_size = size();
  else if (key == "gap") c.gap = size();
  else if (key == "vocab") c.vocab = size();
  else if (key == "mnist_train_images") c.mnist_train_images = value;
  else if (key == "mnist_train_labels") c.mnist_train_labels = value;
  else if (key == "mnist_test_images") c.mnist_test_images = value;
  else if (key == "mnist_test_labels") c.mnist_test_labels = value;
  else if (key == "downsample") c.downsample = size();
  else if (key == "permutation_seed") c.permutation_seed = u64();
  else if (key == "text_train") c.text_train = value;
  else if (key == "text_test") c.text_test = value;
  else if (key == "max_length") c.max_length = size();
  else if (key == "out" || key == "out_dir") c.out_dir = value;
  else if (key == "resume") c.resume = value;
  else throw ArgumentError("config: unknown key '" + std::string(raw_key) + "'");
}

TrainConfig parse_config_text(std::string_view text, TrainConfig base) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ArgumentError("config line " + std::to_string(lineno) +
                          ": expected key = value");
    }
    set_config_value(base, trim(body.substr(0, eq)), trim(body.substr(eq + 1)));
  }
  return base;
}

TrainConfig load_config_file(const std::filesystem::path& path,
                             TrainConfig base) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), std::move(base));
}

std::map<std::string, std::string> config_to_map(const TrainConfig& c) {
  auto num = [](auto v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
  };
  return {
      {"task", std::string(to_string(c.task))},
      {"cell", std::string(to_string(c.cell))},
      {"bidirectional", c.bidirectional ? "true" : "false"},
      {"seq_length", num(c.seq_length)},
      {"hidden", num(c.hidden)},
      {"embedding", num(c.embedding)},
      {"k", num(c.window)},
      {"batch", num(c.batch)},
      {"eval_batch", num(c.eval_batch)},
      {"optimizer", std::string(to_string(c.optimizer_kind()))},
      {"rho", num(c.rho)},
      {"epsilon", num(c.epsilon)},
      {"decay", num(c.decay)},
      {"learning_rate", num(c.learning_rate)},
      {"clip", num(c.clip)},
      {"dropout", num(c.dropout)},
      {"seed", num(c.seed)},
      {"iterations", num(c.iterations)},
      {"eval_interval", num(c.eval_interval)},
      {"checkpoint_interval", num(c.checkpoint_interval)},
      {"train_size", num(c.train_size)},
      {"test_size", num(c.test_size)},
      {"gap", num(c.gap)},
      {"vocab", num(c.vocab)},
      {"downsample", num(c.downsample)},
      {"permutation_seed", num(c.permutation_seed)},
      {"max_length", num(c.max_length)},
  };
}

}  // namespace rra
