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

#include "rra/initializers.h"

#include <cmath>

#include "rra/errors.h"

namespace rra {

double glorot_bound(std::size_t n_in, std::size_t n_out) {
  return std::sqrt(6.0 / static_cast<double>(n_in + n_out));
}

Matrix glorot_uniform(std::size_t n_in, std::size_t n_out, Rng& rng) {
  if (n_in == 0 || n_out == 0) {
    throw ArgumentError("glorot_uniform: zero dimension (" +
                        std::to_string(n_in) + ", " + std::to_string(n_out) +
                        ")");
  }
  const double bound = glorot_bound(n_in, n_out);
  Matrix w(n_out, n_in);
  for (double& v : w.values()) v = rng.uniform(-bound, bound);
  return w;
}

Matrix orthogonal(std::size_t n, Rng& rng) {
  if (n == 0) throw ArgumentError("orthogonal: n must be positive");
  Matrix a(n, n);
  for (double& v : a.values()) v = rng.normal();

  // Modified Gram-Schmidt over the columns, with one re-orthogonalization
  // pass. Normalizing each column by its positive length is exactly the QR
  // factorization with diag(R) >= 0.
  Matrix q(n, n);
  std::vector<double> v(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t r = 0; r < n; ++r) v[r] = a(r, j);
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t p = 0; p < j; ++p) {
        double proj = 0.0;
        for (std::size_t r = 0; r < n; ++r) proj += q(r, p) * v[r];
        for (std::size_t r = 0; r < n; ++r) v[r] -= proj * q(r, p);
      }
    }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm < 1e-12) {
      // Probability zero for Gaussian draws; restart with fresh columns.
      return orthogonal(n, rng);
    }
    for (std::size_t r = 0; r < n; ++r) q(r, j) = v[r] / norm;
  }
  return q;
}

std::vector<double> attention_init(std::size_t k, Rng& rng) {
  if (k == 0) throw ArgumentError("attention_init: k must be positive");
  std::vector<double> w(k);
  for (double& v : w) v = rng.uniform_open(0.1, 1.0);
  return w;
}

}  // namespace rra
