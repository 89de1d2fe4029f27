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

#include "wpunn/tensor.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "wpunn/error.hpp"
#include "wpunn/rng.hpp"

namespace wpunn {
namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstView = Eigen::Map<const RowMajor>;
using View = Eigen::Map<RowMajor>;

ConstView view(const Tensor& t) { return ConstView(t.data().data(), t.rows(), t.cols()); }
View view(Tensor& t) { return View(t.mutable_data().data(), t.rows(), t.cols()); }

void check_rank(const Shape& shape) {
  if (shape.empty() || shape.size() > 2) {
    throw DimensionError("tensor rank must be 1 or 2, got shape " + shape_string(shape));
  }
}

std::size_t element_count(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (a.shape() != b.shape()) {
    throw DimensionError(std::string(op) + ": shape mismatch " + shape_string(a.shape()) +
                         " vs " + shape_string(b.shape()));
  }
}

template <typename Fn>
Tensor zip(const Tensor& a, const Tensor& b, const char* op, Fn fn) {
  require_same_shape(a, b, op);
  Tensor out(a.shape());
  auto o = out.mutable_data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = fn(a[i], b[i]);
  return out;
}

}  // namespace

std::string shape_string(const Shape& shape) {
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += "x";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

Tensor::Tensor(Shape shape, double fill) : shape_(std::move(shape)) {
  check_rank(shape_);
  data_.assign(element_count(shape_), fill);
}

Tensor::Tensor(Shape shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  check_rank(shape_);
  if (element_count(shape_) != data_.size()) {
    throw DimensionError("tensor shape " + shape_string(shape_) + " needs " +
                         std::to_string(element_count(shape_)) + " elements, got " +
                         std::to_string(data_.size()));
  }
}

Tensor Tensor::vector(std::vector<double> values) {
  const std::size_t n = values.size();
  return Tensor({n}, std::move(values));
}

Tensor Tensor::matrix(std::size_t rows, std::size_t cols, std::vector<double> values) {
  return Tensor({rows, cols}, std::move(values));
}

Tensor Tensor::matrix(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r ? rows.begin()->size() : 0;
  std::vector<double> values;
  values.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw DimensionError("Tensor::matrix: ragged rows");
    values.insert(values.end(), row.begin(), row.end());
  }
  return Tensor({r, c}, std::move(values));
}

std::span<const double> Tensor::row(std::size_t r) const {
  return std::span<const double>(data_).subspan(r * cols(), cols());
}

std::span<double> Tensor::mutable_row(std::size_t r) {
  return std::span<double>(data_).subspan(r * cols(), cols());
}

Tensor Tensor::reshaped(Shape shape) const {
  return Tensor(std::move(shape), data_);
}

Tensor matvec(const Tensor& m, const Tensor& v) {
  if (m.rank() != 2 || v.rank() != 1 || m.shape()[1] != v.shape()[0]) {
    throw DimensionError("matvec: cannot multiply " + shape_string(m.shape()) + " by " +
                         shape_string(v.shape()));
  }
  Tensor out({m.shape()[0]});
  if (out.empty()) return out;
  Eigen::Map<Eigen::VectorXd>(out.mutable_data().data(), out.size()).noalias() =
      view(m) * Eigen::Map<const Eigen::VectorXd>(v.data().data(), v.size());
  return out;
}

Tensor matmul(const Tensor& a, const Tensor& b) {
  if (a.rank() != 2 || b.rank() != 2 || a.shape()[1] != b.shape()[0]) {
    throw DimensionError("matmul: cannot multiply " + shape_string(a.shape()) + " by " +
                         shape_string(b.shape()));
  }
  Tensor out({a.shape()[0], b.shape()[1]});
  gemm(false, false, 1.0, a, b, 0.0, out);
  return out;
}

void gemm(bool transpose_a, bool transpose_b, double alpha, const Tensor& a, const Tensor& b,
          double beta, Tensor& c) {
  const std::size_t m = transpose_a ? a.cols() : a.rows();
  const std::size_t ka = transpose_a ? a.rows() : a.cols();
  const std::size_t kb = transpose_b ? b.cols() : b.rows();
  const std::size_t n = transpose_b ? b.rows() : b.cols();
  if (ka != kb || c.rows() != m || c.cols() != n) {
    throw DimensionError("gemm: incompatible shapes " + shape_string(a.shape()) + ", " +
                         shape_string(b.shape()) + " -> " + shape_string(c.shape()));
  }
  if (c.empty()) return;
  auto cv = view(c);
  if (beta == 0.0) {
    cv.setZero();
  } else if (beta != 1.0) {
    cv *= beta;
  }
  if (ka == 0) return;
  const auto av = view(a);
  const auto bv = view(b);
  if (!transpose_a && !transpose_b) {
    cv.noalias() += alpha * av * bv;
  } else if (transpose_a && !transpose_b) {
    cv.noalias() += alpha * av.transpose() * bv;
  } else if (!transpose_a && transpose_b) {
    cv.noalias() += alpha * av * bv.transpose();
  } else {
    cv.noalias() += alpha * av.transpose() * bv.transpose();
  }
}

Tensor add(const Tensor& a, const Tensor& b) {
  return zip(a, b, "add", [](double x, double y) { return x + y; });
}

Tensor subtract(const Tensor& a, const Tensor& b) {
  return zip(a, b, "subtract", [](double x, double y) { return x - y; });
}

Tensor hadamard(const Tensor& a, const Tensor& b) {
  return zip(a, b, "hadamard", [](double x, double y) { return x * y; });
}

Tensor scale(const Tensor& a, double factor) {
  Tensor out = a;
  for (double& v : out.mutable_data()) v *= factor;
  return out;
}

Tensor concat_cols(const Tensor& a, const Tensor& b) {
  if (a.rank() != b.rank() || a.rows() != b.rows()) {
    throw DimensionError("concat_cols: incompatible shapes " + shape_string(a.shape()) + " and " +
                         shape_string(b.shape()));
  }
  const std::size_t cols = a.cols() + b.cols();
  Tensor out = a.rank() == 1 ? Tensor({cols}) : Tensor({a.rows(), cols});
  for (std::size_t r = 0; r < a.rows(); ++r) {
    auto dst = out.mutable_row(r);
    std::ranges::copy(a.row(r), dst.begin());
    std::ranges::copy(b.row(r), dst.begin() + static_cast<std::ptrdiff_t>(a.cols()));
  }
  return out;
}

Tensor take_rows(const Tensor& a, std::span<const std::size_t> indices) {
  if (a.rank() != 2) throw DimensionError("take_rows: need rank 2, got " + shape_string(a.shape()));
  Tensor out({indices.size(), a.cols()});
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= a.rows()) {
      throw DimensionError("take_rows: row " + std::to_string(indices[i]) + " out of range for " +
                           shape_string(a.shape()));
    }
    std::ranges::copy(a.row(indices[i]), out.mutable_row(i).begin());
  }
  return out;
}

bool all_finite(const Tensor& t) {
  return std::ranges::all_of(t.data(), [](double v) { return std::isfinite(v); });
}

double max_abs_diff(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "max_abs_diff");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

Tensor uniform(Rng& rng, std::size_t n, double lo, double hi) {
  return uniform(rng, Shape{n}, lo, hi);
}

Tensor uniform(Rng& rng, Shape shape, double lo, double hi) {
  if (!(lo < hi)) {
    throw ArgumentError("uniform: require lo < hi, got lo=" + std::to_string(lo) +
                        " hi=" + std::to_string(hi));
  }
  Tensor out(std::move(shape));
  for (double& v : out.mutable_data()) v = rng.uniform(lo, hi);
  return out;
}

}  // namespace wpunn
