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

#include "rra/adding.h"

#include <string>

#include "rra/errors.h"

namespace rra {

std::vector<AddingExample> gen_adding(std::size_t length, std::size_t count,
                                      Rng& rng) {
  if (length < 10) {
    throw ArgumentError("gen_adding: sequence length " +
                        std::to_string(length) + " < 10");
  }
  const std::size_t first_max = length / 10;
  const std::size_t second_min = length / 2;
  std::vector<AddingExample> out(count);
  for (AddingExample& ex : out) {
    ex.values.resize(length);
    for (double& v : ex.values) v = rng.uniform();
    ex.markers.assign(length, 0);
    const std::size_t i = rng.below(first_max + 1);
    const std::size_t j = second_min + rng.below(length - second_min);
    ex.markers[i] = 1;
    ex.markers[j] = 1;
    ex.target = ex.values[i] + ex.values[j];
  }
  return out;
}

Batch make_adding_batch(std::span<const AddingExample> data,
                        std::span<const std::size_t> indices) {
  if (indices.empty()) throw ArgumentError("make_adding_batch: no examples");
  const std::size_t length = data[indices[0]].values.size();
  const std::size_t n = indices.size();
  Batch batch;
  batch.steps.assign(length, Matrix(2, n));
  for (std::size_t b = 0; b < n; ++b) {
    const AddingExample& ex = data[indices[b]];
    if (ex.values.size() != length) {
      throw DimensionError("make_adding_batch: mixed sequence lengths");
    }
    for (std::size_t t = 0; t < length; ++t) {
      batch.steps[t](0, b) = ex.values[t];
      batch.steps[t](1, b) = ex.markers[t];
    }
    batch.targets.push_back(ex.target);
  }
  return batch;
}

}  // namespace rra
