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

#include "rra/matrix.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <sstream>

#include "rra/errors.h"


namespace rra {

namespace {

[[noreturn]] void mismatch(const char* op, const Matrix& a, const Matrix& b) {
  throw DimensionError(std::string(op) + ": dimension mismatch " +
                       a.shape_string() + " vs " + b.shape_string());
}

void require_same_shape(const char* op, const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b)) mismatch(op, a, b);
}

// Four independent accumulators; the summation order is fixed by the code,
// not by the vectorizer, so results are reproducible.
double dot_contiguous(const double* x, const double* y, std::size_t n) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += x[i] * y[i];
    s1 += x[i + 1] * y[i + 1];
    s2 += x[i + 2] * y[i + 2];
    s3 += x[i + 3] * y[i + 3];
  }
  for (; i < n; ++i) s0 += x[i] * y[i];
  return (s0 + s1) + (s2 + s3);
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw DimensionError("Matrix: " + std::to_string(data_.size()) +
                         " values do not fill " + shape_string());
  }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionError("Matrix: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::column(std::span<const double> values) {
  return Matrix(values.size(), 1,
                std::vector<double>(values.begin(), values.end()));
}

Matrix Matrix::row_block(std::size_t begin, std::size_t count) const {
  if (begin + count > rows_) {
    throw DimensionError("row_block: rows [" + std::to_string(begin) + ", " +
                         std::to_string(begin + count) + ") outside " +
                         shape_string());
  }
  Matrix out(count, cols_);
  std::copy_n(data_.begin() + begin * cols_, count * cols_, out.data_.begin());
  return out;
}

Matrix Matrix::col(std::size_t c) const {
  Matrix out(rows_, 1);
  for (std::size_t r = 0; r < rows_; ++r) out.data_[r] = (*this)(r, c);
  return out;
}

void Matrix::set_col(std::size_t c, const Matrix& column) {
  if (column.rows_ != rows_ || column.cols_ != 1) {
    throw DimensionError("set_col: " + column.shape_string() +
                         " is not a column of " + shape_string());
  }
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = column.data_[r];
}

void Matrix::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

Matrix& Matrix::operator+=(const Matrix& other) {
  require_same_shape("operator+=", *this, other);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

Matrix& Matrix::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

std::string Matrix::shape_string() const {
  std::ostringstream os;
  os << rows_ << "x" << cols_;
  return os.str();
}

namespace {

// Transcendentals go through glibc's vector math library when the build
// targets a CPU it supports. Every element, the tail included, takes the
// same path, so a value's result never depends on where it sits.
#if defined(RRA_USE_MVEC) && defined(__AVX512F__)
using Lanes = double __attribute__((vector_size(64)));
extern "C" Lanes _ZGVeN8v_exp(Lanes);
extern "C" Lanes _ZGVeN8v_tanh(Lanes);
Lanes lanes_exp(Lanes x) { return _ZGVeN8v_exp(x); }
Lanes lanes_tanh(Lanes x) { return _ZGVeN8v_tanh(x); }
#elif defined(RRA_USE_MVEC) && defined(__AVX2__)
using Lanes = double __attribute__((vector_size(32)));
extern "C" Lanes _ZGVdN4v_exp(Lanes);
extern "C" Lanes _ZGVdN4v_tanh(Lanes);
Lanes lanes_exp(Lanes x) { return _ZGVdN4v_exp(x); }
Lanes lanes_tanh(Lanes x) { return _ZGVdN4v_tanh(x); }
#else
using Lanes = double __attribute__((vector_size(8)));
Lanes lanes_exp(Lanes x) { return Lanes{std::exp(x[0])}; }
Lanes lanes_tanh(Lanes x) { return Lanes{std::tanh(x[0])}; }
#endif
constexpr std::size_t kLanes = sizeof(Lanes) / sizeof(double);

// Stable logistic: exp only ever sees -|x|.
Lanes lanes_sigmoid(Lanes x) {
  const Lanes ax = x < 0.0 ? -x : x;
  const Lanes e = lanes_exp(-ax);
  const Lanes one = Lanes{} + 1.0;
  return (x >= 0.0 ? one : e) / (1.0 + e);
}

template <typename F>
void map_lanes(std::span<double> v, F fn) {
  std::size_t i = 0;
  for (; i + kLanes <= v.size(); i += kLanes) {
    Lanes x;
    std::memcpy(&x, v.data() + i, sizeof x);
    x = fn(x);
    std::memcpy(v.data() + i, &x, sizeof x);
  }
  if (i < v.size()) {
    Lanes x = {};
    const std::size_t rest = v.size() - i;
    std::memcpy(&x, v.data() + i, rest * sizeof(double));
    x = fn(x);
    std::memcpy(v.data() + i, &x, rest * sizeof(double));
  }
}

}  // namespace

void sigmoid_inplace(std::span<double> v) { map_lanes(v, lanes_sigmoid); }
void tanh_inplace(std::span<double> v) { map_lanes(v, lanes_tanh); }

double sigmoid(double x) {
  sigmoid_inplace({&x, 1});
  return x;
}

namespace {

// c (m x n, row-major) = or += a * b, where a(i, p) = a[i * ars + p * acs]
// and b is row-major k x n. Each output element is summed over p in
// ascending order starting from zero, exactly like the textbook triple
// loop, so results do not depend on the tiling or on other columns. Tiles
// of 12 rows x 8 columns are held in vector registers; edge tiles are
// zero-padded and only their valid part is stored.
typedef double Lane8 __attribute__((vector_size(64)));

void gemm(std::size_t m, std::size_t n, std::size_t k, const double* a,
          std::size_t ars, std::size_t acs, const double* b, double* c,
          bool accumulate) {
  constexpr std::size_t kRows = 12;
  constexpr std::size_t kCols = 8;
  if (m == 0 || n == 0) return;
  std::vector<double> panel(kRows * k);  // rows i0.. of a, p-major
  for (std::size_t i0 = 0; i0 < m; i0 += kRows) {
    const std::size_t rows = std::min(kRows, m - i0);
    std::fill(panel.begin(), panel.end(), 0.0);
    for (std::size_t p = 0; p < k; ++p) {
      for (std::size_t r = 0; r < rows; ++r) {
        panel[p * kRows + r] = a[(i0 + r) * ars + p * acs];
      }
    }
    for (std::size_t j0 = 0; j0 < n; j0 += kCols) {
      const std::size_t cols = std::min(kCols, n - j0);
      Lane8 acc[kRows] = {};
      if (cols == kCols) {
        for (std::size_t p = 0; p < k; ++p) {
          Lane8 bv;
          std::memcpy(&bv, b + p * n + j0, sizeof(bv));
          const double* ap = panel.data() + p * kRows;
          for (std::size_t r = 0; r < kRows; ++r) acc[r] += ap[r] * bv;
        }
      } else {
        for (std::size_t p = 0; p < k; ++p) {
          Lane8 bv = {};
          for (std::size_t q = 0; q < cols; ++q) bv[q] = b[p * n + j0 + q];
          const double* ap = panel.data() + p * kRows;
          for (std::size_t r = 0; r < kRows; ++r) acc[r] += ap[r] * bv;
        }
      }
      for (std::size_t r = 0; r < rows; ++r) {
        double* crow = c + (i0 + r) * n + j0;
        for (std::size_t q = 0; q < cols; ++q) {
          crow[q] = accumulate ? crow[q] + acc[r][q] : acc[r][q];
        }
      }
    }
  }
}

}  // namespace

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) mismatch("matmul", a, b);
  const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  Matrix out(m, n);
  gemm(m, n, k, a.values().data(), k, 1, b.values().data(),
       out.values().data(), false);
  return out;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) mismatch("matmul_tn", a, b);
  const std::size_t k = a.rows(), m = a.cols(), n = b.cols();
  Matrix out(m, n);
  gemm(m, n, k, a.values().data(), 1, m, b.values().data(),
       out.values().data(), false);
  return out;
}

void add_matmul_nt(Matrix& out, const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) mismatch("add_matmul_nt", a, b);
  if (out.rows() != a.rows() || out.cols() != b.rows()) {
    mismatch("add_matmul_nt(out)", out, a);
  }
  const Matrix bt = transpose(b);
  gemm(a.rows(), b.rows(), a.cols(), a.values().data(), a.cols(), 1,
       bt.values().data(), out.values().data(), true);
}

Matrix elementwise_unary(const Matrix& a, Unary fn) {
  Matrix out = a;
  switch (fn) {
    case Unary::kSigmoid:
      sigmoid_inplace(out.values());
      break;
    case Unary::kTanh:
      tanh_inplace(out.values());
      break;
  }
  return out;
}

Matrix elementwise_binary(const Matrix& a, const Matrix& b, Binary fn) {
  require_same_shape("elementwise_binary", a, b);
  Matrix out = Matrix::zeros_like(a);
  auto x = a.values();
  auto y = b.values();
  auto dst = out.values();
  switch (fn) {
    case Binary::kAdd:
      for (std::size_t i = 0; i < x.size(); ++i) dst[i] = x[i] + y[i];
      break;
    case Binary::kHadamard:
      for (std::size_t i = 0; i < x.size(); ++i) dst[i] = x[i] * y[i];
      break;
  }
  return out;
}

Matrix concat_rows(const Matrix& a, const Matrix& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  if (a.cols() != b.cols()) mismatch("concat_rows", a, b);
  std::vector<double> data;
  data.reserve(a.size() + b.size());
  data.insert(data.end(), a.values().begin(), a.values().end());
  data.insert(data.end(), b.values().begin(), b.values().end());
  return Matrix(a.rows() + b.rows(), a.cols(), std::move(data));
}

Matrix transpose(const Matrix& a) {
  Matrix out(a.cols(), a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) out(c, r) = a(r, c);
  return out;
}

Matrix row_sums(const Matrix& a) {
  Matrix out(a.rows(), 1);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    double s = 0.0;
    for (double v : a.row(r)) s += v;
    out[r] = s;
  }
  return out;
}

double sum(const Matrix& a) {
  double s = 0.0;
  for (double v : a.values()) s += v;
  return s;
}

double dot(const Matrix& a, const Matrix& b) {
  require_same_shape("dot", a, b);
  return dot_contiguous(a.values().data(), b.values().data(), a.size());
}

double squared_norm(const Matrix& a) { return dot(a, a); }

double max_abs(const Matrix& a) {
  double m = 0.0;
  for (double v : a.values()) m = std::max(m, std::abs(v));
  return m;
}

bool all_finite(const Matrix& a) {
  return std::all_of(a.values().begin(), a.values().end(),
                     [](double v) { return std::isfinite(v); });
}

}  // namespace rra
