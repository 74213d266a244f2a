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

#ifndef RRA_ADDING_H_
#define RRA_ADDING_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rra/model.h"
#include "rra/rng.h"

namespace rra {

// One adding-problem sequence: predict the sum of the two marked values.
struct AddingExample {
  std::vector<double> values;         // S values, i.i.d. U[0, 1)
  std::vector<std::uint8_t> markers;  // exactly two ones
  double target = 0.0;
};

// The first marker is uniform on [0, floor(S/10)], the second on
// [floor(S/2), S). Requires S >= 10.
std::vector<AddingExample> gen_adding(std::size_t length, std::size_t count,
                                      Rng& rng);

// Two features per step: (value, marker).
Batch make_adding_batch(std::span<const AddingExample> data,
                        std::span<const std::size_t> indices);

}  // namespace rra

#endif  // RRA_ADDING_H_
