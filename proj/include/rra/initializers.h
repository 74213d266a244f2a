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

#ifndef RRA_INITIALIZERS_H_
#define RRA_INITIALIZERS_H_

#include <cstddef>
#include <vector>

#include "rra/matrix.h"
#include "rra/rng.h"

namespace rra {

// n_out x n_in matrix, entries uniform in +-sqrt(6 / (n_in + n_out)).
Matrix glorot_uniform(std::size_t n_in, std::size_t n_out, Rng& rng);
double glorot_bound(std::size_t n_in, std::size_t n_out);

// Random n x n orthogonal matrix: Q from the QR factorization of a
// standard-normal matrix, signs fixed so that R has a non-negative diagonal.
Matrix orthogonal(std::size_t n, Rng& rng);

// k raw attention weights, uniform on (0.1, 1.0).
std::vector<double> attention_init(std::size_t k, Rng& rng);

}  // namespace rra

#endif  // RRA_INITIALIZERS_H_
