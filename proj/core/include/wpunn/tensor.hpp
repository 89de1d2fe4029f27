/* Copyright 2026 The WPUNN Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace wpunn {

class Rng;

using Shape = std::vector<std::size_t>;

std::string shape_string(const Shape& shape);

// Dense row-major array of doubles, rank 1 or 2.
//
// A rank-2 tensor [rows x cols] is how batches travel through the library:
// one sample per row. A rank-1 tensor [n] behaves as a single row where an
// operation is defined row-wise.
class Tensor {
 public:
  Tensor() : shape_{0} {}
  explicit Tensor(Shape shape, double fill = 0.0);
  Tensor(Shape shape, std::vector<double> data);

  static Tensor vector(std::vector<double> values);
  static Tensor matrix(std::size_t rows, std::size_t cols, std::vector<double> values);
  static Tensor matrix(std::initializer_list<std::initializer_list<double>> rows);
  static Tensor zeros_like(const Tensor& other) { return Tensor(other.shape_); }

  const Shape& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  // Row view: rank-1 tensors have one row.
  std::size_t rows() const { return rank() == 1 ? 1 : shape_[0]; }
  std::size_t cols() const { return rank() == 1 ? shape_[0] : shape_[1]; }

  std::span<const double> data() const { return data_; }
  std::span<double> mutable_data() { return data_; }
  std::span<const double> row(std::size_t r) const;
  std::span<double> mutable_row(std::size_t r);

  double operator[](std::size_t i) const { return data_[i]; }
  double& operator[](std::size_t i) { return data_[i]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * cols() + c]; }

  Tensor reshaped(Shape shape) const;

  bool operator==(const Tensor& other) const = default;

 private:
  Shape shape_;
  std::vector<double> data_;
};

// [r x c] . [c] -> [r]
Tensor matvec(const Tensor& m, const Tensor& v);
// [r x k] . [k x c] -> [r x c]
Tensor matmul(const Tensor& a, const Tensor& b);

// c = alpha * op(a) * op(b) + beta * c, op = transpose when the flag is set.
// Both operands are read through their row view. c must already have the
// result shape (in row view).
void gemm(bool transpose_a, bool transpose_b, double alpha, const Tensor& a, const Tensor& b,
          double beta, Tensor& c);

Tensor add(const Tensor& a, const Tensor& b);
Tensor subtract(const Tensor& a, const Tensor& b);
Tensor hadamard(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double factor);

// Horizontal concatenation: rank-1 with rank-1, or rank-2 with equal rows.
Tensor concat_cols(const Tensor& a, const Tensor& b);
// Gathers the given rows of a rank-2 tensor.
Tensor take_rows(const Tensor& a, std::span<const std::size_t> indices);

bool all_finite(const Tensor& t);
double max_abs_diff(const Tensor& a, const Tensor& b);

// n draws from rng.uniform(lo, hi).
Tensor uniform(Rng& rng, std::size_t n, double lo, double hi);
Tensor uniform(Rng& rng, Shape shape, double lo, double hi);

}  // namespace wpunn
