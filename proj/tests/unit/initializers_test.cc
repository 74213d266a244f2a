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
#include <numeric>

#include "doctest.h"
#include "rra/cells.h"
#include "rra/errors.h"
#include "rra/initializers.h"
#include "rra/rng.h"

namespace rra {
namespace {

double max_abs_deviation_from_identity(const Matrix& q) {
  const Matrix qtq = matmul_tn(q, q);
  double worst = 0.0;
  for (std::size_t i = 0; i < qtq.rows(); ++i) {
    for (std::size_t j = 0; j < qtq.cols(); ++j) {
      worst = std::max(worst, std::abs(qtq(i, j) - (i == j ? 1.0 : 0.0)));
    }
  }
  return worst;
}

// Determinant by Gaussian elimination with partial pivoting.
double determinant(Matrix m) {
  const std::size_t n = m.rows();
  double det = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(m(r, c)) > std::abs(m(pivot, c))) pivot = r;
    }
    if (pivot != c) {
      for (std::size_t k = 0; k < n; ++k) std::swap(m(c, k), m(pivot, k));
      det = -det;
    }
    det *= m(c, c);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = m(r, c) / m(c, c);
      for (std::size_t k = c; k < n; ++k) m(r, k) -= f * m(c, k);
    }
  }
  return det;
}

TEST_CASE("rng is deterministic and splits are independent") {
  Rng a(42), b(42), c(43);
  for (int i = 0; i < 10; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    CHECK(x != c.next_u64());
  }
  const Rng root(5);
  Rng s1 = root.split("init"), s2 = root.split("init"), s3 = root.split("data");
  CHECK(s1.next_u64() == s2.next_u64());
  CHECK(root.split("init").next_u64() != s3.next_u64());
  CHECK(root.split(std::uint64_t{0}).next_u64() !=
        root.split(std::uint64_t{1}).next_u64());
}

TEST_CASE("rng draw ranges") {
  Rng rng(1);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const double o = rng.uniform_open(0.1, 1.0);
    CHECK(o > 0.1);
    CHECK(o < 1.0);
    CHECK(rng.below(7) < 7);
  }
}

TEST_CASE("glorot bound arithmetic") {
  CHECK(glorot_bound(3, 3) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(glorot_bound(98, 100) ==
        doctest::Approx(0.17407765595569785).epsilon(1e-15));
  Rng rng(0);
  const Matrix w = glorot_uniform(3, 3, rng);
  for (double v : w.values()) CHECK(std::abs(v) <= 1.0);
  CHECK_THROWS_AS(glorot_uniform(0, 3, rng), ArgumentError);
  CHECK_THROWS_AS(glorot_uniform(3, 0, rng), ArgumentError);
}

TEST_CASE("glorot shape, sample mean and bound sweep") {
  Rng rng(17);
  const Matrix w = glorot_uniform(98, 100, rng);
  CHECK(w.rows() == 100);
  CHECK(w.cols() == 98);
  const Matrix big = glorot_uniform(100, 100, rng);
  double mean = 0.0;
  for (double v : big.values()) mean += v;
  mean /= static_cast<double>(big.size());
  CHECK(std::abs(mean) < 0.01);
  CHECK(max_abs(big) <= glorot_bound(100, 100));
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n_in = 1 + rng.below(60);
    const std::size_t n_out = 1 + rng.below(60);
    CHECK(max_abs(glorot_uniform(n_in, n_out, rng)) <=
          glorot_bound(n_in, n_out));
  }
}

TEST_CASE("orthogonal matrices") {
  Rng rng(3);
  const Matrix one = orthogonal(1, rng);
  CHECK(std::abs(one[0]) == 1.0);

  const Matrix q = orthogonal(8, rng);
  CHECK(max_abs_deviation_from_identity(q) < 1e-10);
  CHECK(std::abs(std::abs(determinant(q)) - 1.0) < 1e-8);

  Matrix v(8, 1);
  for (double& x : v.values()) x = rng.normal();
  const Matrix qv = matmul(q, v);
  CHECK(std::abs(std::sqrt(squared_norm(qv)) - std::sqrt(squared_norm(v))) <
        1e-10);

  for (std::size_t n : {2, 5, 64, 128}) {
    CHECK(max_abs_deviation_from_identity(orthogonal(n, rng)) < 1e-10);
  }
}

TEST_CASE("attention init") {
  Rng rng(4);
  const auto one = attention_init(1, rng);
  REQUIRE(one.size() == 1);
  CHECK(one[0] > 0.0);
  CHECK(normalize_attention(one)[0] == 1.0);

  const auto ten = attention_init(10, rng);
  for (double w : ten) {
    CHECK(w > 0.1);
    CHECK(w < 1.0);
  }
  Rng a(42), b(42);
  CHECK(attention_init(5, a) == attention_init(5, b));
  CHECK_THROWS_AS(attention_init(0, rng), ArgumentError);
}

TEST_CASE("initializers are deterministic") {
  Rng a(8), b(8);
  CHECK(glorot_uniform(7, 5, a) == glorot_uniform(7, 5, b));
  CHECK(orthogonal(6, a) == orthogonal(6, b));
  const CellParams pa = init_cell(CellKind::kRra, 3, 4, 3, a);
  const CellParams pb = init_cell(CellKind::kRra, 3, 4, 3, b);
  CHECK(pa.w_gates == pb.w_gates);
  CHECK(pa.w_a == pb.w_a);
}

TEST_CASE("cell init layout: glorot input block, orthogonal recurrent blocks") {
  Rng rng(12);
  const std::size_t d = 3, h = 5;
  const CellParams p = init_cell(CellKind::kRra, d, h, 4, rng);
  CHECK(max_abs(p.b_gates) == 0.0);
  for (std::size_t gate = 0; gate < 4; ++gate) {
    Matrix wh(h, h);
    for (std::size_t r = 0; r < h; ++r) {
      for (std::size_t c = 0; c < d; ++c) {
        CHECK(std::abs(p.w_gates(gate * h + r, c)) <= glorot_bound(d, h));
      }
      for (std::size_t c = 0; c < h; ++c) wh(r, c) = p.w_gates(gate * h + r, d + c);
    }
    CHECK(max_abs_deviation_from_identity(wh) < 1e-10);
  }
  for (double w : p.w_a.values()) {
    CHECK(w > 0.1);
    CHECK(w < 1.0);
  }
}

}  // namespace
}  // namespace rra
