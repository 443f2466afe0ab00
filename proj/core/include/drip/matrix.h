// Copyright 2026 The DRIP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DRIP_MATRIX_H_
#define DRIP_MATRIX_H_

#include <cassert>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace drip {

// Dense row-major matrix of doubles. Batches of records are stored one record
// per row throughout the library.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  static Matrix Identity(std::size_t n);
  static Matrix FromRows(std::initializer_list<std::initializer_list<double>> rows);
  // Single-column matrix holding `values`.
  static Matrix Column(std::span<const double> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) {
    assert(r < rows_ && c < cols_);
    return data_[r * cols_ + c];
  }
  double operator()(std::size_t r, std::size_t c) const {
    assert(r < rows_ && c < cols_);
    return data_[r * cols_ + c];
  }

  std::span<double> row(std::size_t r) {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  std::vector<double> ColumnCopy(std::size_t c) const;
  Matrix Transposed() const;
  // Rows selected by `indices`, in order.
  Matrix SelectRows(std::span<const std::size_t> indices) const;
  // Columns [begin, begin + count).
  Matrix ColumnBlock(std::size_t begin, std::size_t count) const;

  bool AllFinite() const;
  bool SameShape(const Matrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(double scale);

  friend bool operator==(const Matrix& a, const Matrix& b) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(Matrix a, double scale);
Matrix operator*(double scale, Matrix a);

// a * b
Matrix MatMul(const Matrix& a, const Matrix& b);
// a^T * b
Matrix MatMulTransA(const Matrix& a, const Matrix& b);
// a * b^T
Matrix MatMulTransB(const Matrix& a, const Matrix& b);
std::vector<double> MatVec(const Matrix& a, std::span<const double> x);
std::vector<double> MatTransVec(const Matrix& a, std::span<const double> x);

double FrobeniusNorm(const Matrix& a);
double MaxAbs(const Matrix& a);
double Trace(const Matrix& a);

double Dot(std::span<const double> a, std::span<const double> b);
double Norm2(std::span<const double> a);
double SquaredDistance(std::span<const double> a, std::span<const double> b);

// Horizontal concatenation; all blocks must have equal row counts.
Matrix ConcatColumns(std::span<const Matrix> blocks);

}  // namespace drip

#endif  // DRIP_MATRIX_H_
