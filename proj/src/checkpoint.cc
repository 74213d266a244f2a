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

#include "rra/checkpoint.h"

#include <cstring>
#include <map>

#include "rra/binary_io.h"
#include "rra/errors.h"

namespace rra {

namespace {

constexpr char kMagic[8] = {'R', 'R', 'A', 'C', 'K', 'P', 'T', '\0'};

std::uint64_t fnv1a(const std::uint8_t* data, std::size_t n) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= data[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

void put_matrix(ByteWriter& w, const std::string& name, const Matrix& m) {
  w.put_string(name);
  w.put_u64(m.rows());
  w.put_u64(m.cols());
  for (double v : m.values()) w.put_f64(v);
}

// Skeleton with the right block shapes for `config`.
ModelParams shaped_params(const ModelConfig& config) {
  ModelParams p;
  if (config.vocab > 0) p.embedding = Matrix(config.vocab, config.embedding);
  p.forward_cell = CellParams::zeros(config.cell, config.cell_input(),
                                     config.hidden, config.window);
  if (config.bidirectional) {
    p.backward_cell = CellParams::zeros(config.cell, config.cell_input(),
                                        config.hidden, config.window);
  }
  p.readout_w = Matrix(config.outputs, config.readout_width());
  p.readout_b = Matrix(config.outputs, 1);
  return p;
}

}  // namespace

std::vector<std::uint8_t> serialize_checkpoint(const Checkpoint& ckpt) {
  ByteWriter w;
  w.put_bytes(kMagic, sizeof kMagic);
  w.put_u32(kCheckpointVersion);

  const ModelConfig& m = ckpt.model;
  w.put_u32(m.cell == CellKind::kRra ? 1 : 0);
  w.put_u32(m.bidirectional ? 1 : 0);
  w.put_u64(m.input_size);
  w.put_u64(m.vocab);
  w.put_u64(m.embedding);
  w.put_u64(m.hidden);
  w.put_u64(m.window);
  w.put_u64(m.outputs);
  w.put_f64(m.dropout);

  w.put_u64(ckpt.iteration);

  const OptimizerConfig& o = ckpt.optim.config;
  w.put_u32(o.kind == OptimizerKind::kAdadelta ? 0 : 1);
  w.put_f64(o.rho);
  w.put_f64(o.epsilon);
  w.put_f64(o.decay);
  w.put_f64(o.learning_rate);
  w.put_u64(ckpt.optim.steps);

  const auto blocks = ckpt.params.blocks();
  const bool adadelta = o.kind == OptimizerKind::kAdadelta;
  if (ckpt.optim.mean_sq_grad.size() != blocks.size() ||
      (adadelta && ckpt.optim.mean_sq_update.size() != blocks.size())) {
    throw ArgumentError("checkpoint: optimizer state does not match parameters");
  }
  const std::size_t per_block = adadelta ? 3 : 2;
  w.put_u32(static_cast<std::uint32_t>(blocks.size() * per_block));
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    put_matrix(w, "param/" + blocks[i].name, *blocks[i].value);
    put_matrix(w, "opt.sq_grad/" + blocks[i].name, ckpt.optim.mean_sq_grad[i]);
    if (adadelta) {
      put_matrix(w, "opt.sq_update/" + blocks[i].name,
                 ckpt.optim.mean_sq_update[i]);
    }
  }
  std::vector<std::uint8_t> bytes = w.bytes();
  const std::uint64_t sum = fnv1a(bytes.data(), bytes.size());
  const auto* p = reinterpret_cast<const std::uint8_t*>(&sum);
  bytes.insert(bytes.end(), p, p + sizeof sum);
  return bytes;
}

Checkpoint deserialize_checkpoint(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < sizeof kMagic ||
      std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0) {
    throw FormatError("checkpoint: bad magic bytes");
  }
  ByteReader r(bytes.data(), bytes.size());
  char magic[8];
  r.get_bytes(magic, sizeof magic);
  const std::uint32_t version = r.get_u32();
  if (version != kCheckpointVersion) {
    throw VersionError("checkpoint: format version " + std::to_string(version) +
                       ", this build reads version " +
                       std::to_string(kCheckpointVersion));
  }
  if (bytes.size() < 8 + sizeof(std::uint64_t)) {
    throw CorruptError("checkpoint: too short");
  }
  std::uint64_t stored;
  std::memcpy(&stored, bytes.data() + bytes.size() - sizeof stored, sizeof stored);
  if (fnv1a(bytes.data(), bytes.size() - sizeof stored) != stored) {
    throw CorruptError("checkpoint: checksum mismatch (corrupt payload)");
  }

  try {
    Checkpoint ckpt;
    ModelConfig& m = ckpt.model;
    m.cell = r.get_u32() == 1 ? CellKind::kRra : CellKind::kLstm;
    m.bidirectional = r.get_u32() != 0;
    m.input_size = r.get_u64();
    m.vocab = r.get_u64();
    m.embedding = r.get_u64();
    m.hidden = r.get_u64();
    m.window = r.get_u64();
    m.outputs = r.get_u64();
    m.dropout = r.get_f64();
    m.validate();

    ckpt.iteration = r.get_u64();

    OptimizerConfig& o = ckpt.optim.config;
    o.kind = r.get_u32() == 0 ? OptimizerKind::kAdadelta : OptimizerKind::kRmsprop;
    o.rho = r.get_f64();
    o.epsilon = r.get_f64();
    o.decay = r.get_f64();
    o.learning_rate = r.get_f64();
    ckpt.optim.steps = r.get_u64();

    std::map<std::string, Matrix> stored_blocks;
    const std::uint32_t count = r.get_u32();
    for (std::uint32_t i = 0; i < count; ++i) {
      std::string name = r.get_string();
      const std::uint64_t rows = r.get_u64();
      const std::uint64_t cols = r.get_u64();
      if (rows * cols * sizeof(double) > r.remaining()) {
        throw CorruptError("checkpoint: block " + name + " overruns file");
      }
      std::vector<double> data(rows * cols);
      for (double& v : data) v = r.get_f64();
      stored_blocks.emplace(std::move(name), Matrix(rows, cols, std::move(data)));
    }

    ckpt.params = shaped_params(m);
    const bool adadelta = o.kind == OptimizerKind::kAdadelta;
    auto take = [&](const std::string& name, const Matrix& like) {
      auto it = stored_blocks.find(name);
      if (it == stored_blocks.end()) {
        throw CorruptError("checkpoint: missing block " + name);
      }
      if (!it->second.same_shape(like)) {
        throw CorruptError("checkpoint: block " + name + " has shape " +
                           it->second.shape_string() + ", expected " +
                           like.shape_string());
      }
      return std::move(it->second);
    };
    for (auto& block : ckpt.params.blocks()) {
      *block.value = take("param/" + block.name, *block.value);
      ckpt.optim.mean_sq_grad.push_back(
          take("opt.sq_grad/" + block.name, *block.value));
      if (adadelta) {
        ckpt.optim.mean_sq_update.push_back(
            take("opt.sq_update/" + block.name, *block.value));
      }
    }
    return ckpt;
  } catch (const TruncatedError& e) {
    throw CorruptError(std::string("checkpoint: ") + e.what());
  } catch (const ArgumentError& e) {
    throw CorruptError(std::string("checkpoint: ") + e.what());
  }
}

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  // Write to a sibling and rename so a crash never leaves a torn file.
  const std::filesystem::path tmp = path.string() + ".tmp";
  write_binary_file(tmp.string(), serialize_checkpoint(ckpt));
  std::filesystem::rename(tmp, path);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  return deserialize_checkpoint(read_binary_file(path.string()));
}

}  // namespace rra
