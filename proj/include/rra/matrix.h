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

#ifndef RRA_MATRIX_H_
#define RRA_MATRIX_H_

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace rra {

// Dense row-major matrix of doubles. Every parameter, activation and
// gradient in the library lives in one of these. A vector is an n x 1
// matrix; a batch of vectors is stored column-per-sample.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix column(std::span<const double> values);
  static Matrix zeros_like(const Matrix& other) {
    return Matrix(other.rows_, other.cols_);
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }
  bool same_shape(const Matrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  double& operator()(std::size_t r, std::size_t c) {
    return data_[r * cols_ + c];
  }
  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }
  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }
  std::span<double> row(std::size_t r) {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  // Rows [begin, begin + count) as a new matrix.
  Matrix row_block(std::size_t begin, std::size_t count) const;
  Matrix col(std::size_t c) const;
  void set_col(std::size_t c, const Matrix& column);

  void fill(double v);
  Matrix& operator+=(const Matrix& other);
  Matrix& operator*=(double s);

  std::string shape_string() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

enum class Unary { kSigmoid, kTanh };
enum class Binary { kAdd, kHadamard };

double sigmoid(double x);
// Elementwise in place over contiguous storage.
void sigmoid_inplace(std::span<double> v);
void tanh_inplace(std::span<double> v);

// a * b. Throws DimensionError naming both shapes when inner dims differ.
Matrix matmul(const Matrix& a, const Matrix& b);
// a^T * b without materializing the transpose.
Matrix matmul_tn(const Matrix& a, const Matrix& b);
// out += a * b^T.
void add_matmul_nt(Matrix& out, const Matrix& a, const Matrix& b);

Matrix elementwise_unary(const Matrix& a, Unary fn);
Matrix elementwise_binary(const Matrix& a, const Matrix& b, Binary fn);
Matrix concat_rows(const Matrix& a, const Matrix& b);

Matrix transpose(const Matrix& a);
// Sum over columns: an r x 1 result.
Matrix row_sums(const Matrix& a);
double sum(const Matrix& a);
double dot(const Matrix& a, const Matrix& b);
double squared_norm(const Matrix& a);
double max_abs(const Matrix& a);
bool all_finite(const Matrix& a);

}  // namespace rra

#endif  // RRA_MATRIX_H_
