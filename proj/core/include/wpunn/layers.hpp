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
#include <string_view>

#include "wpunn/autodiff.hpp"
#include "wpunn/tensor.hpp"

namespace wpunn {

class Rng;

enum class Aggregator { Product, Max };

std::string_view to_string(Aggregator aggregator);
Aggregator parse_aggregator(std::string_view text);

// Sliding window over a vector: windows start at offsets 0, stride, 2*stride, ...
// and only full windows produce an output. With Aggregator::Max this is 1-d
// max pooling.
struct WindowConfig {
  std::size_t window = 2;
  std::size_t stride = 2;
  Aggregator aggregator = Aggregator::Product;

  bool operator==(const WindowConfig&) const = default;
};

// Largest magnitude a window product may reach before the forward pass
// raises NumericError.
inline constexpr double kWindowProductLimit = 1e150;

// floor((n - window) / stride) + 1. Throws ConfigError unless
// 1 <= stride <= window <= n. Trailing inputs that do not fill a whole
// window are ignored.
std::size_t output_width(std::size_t n, const WindowConfig& cfg);

// Row-wise window aggregation of a [n] or [batch x n] tensor.
Tensor windowed_forward(const Tensor& x, const WindowConfig& cfg);

// Gradient with respect to x given the upstream gradient of the output.
// For the product, each window contributes upstream_i times the product of
// the other window elements (prefix/suffix products, no division), so zero
// inputs are handled exactly and overlapping windows accumulate. For max the
// gradient is routed to the first maximal element of each window.
Tensor windowed_backward(const Tensor& x, const WindowConfig& cfg, const Tensor& upstream);

NodeId window(Tape& tape, NodeId x, const WindowConfig& cfg);

// Fully connected layer: y = weights . x + biases.
struct DenseLayer {
  Tensor weights;  // [out x in]
  Tensor biases;   // [out]

  std::size_t in_width() const { return weights.shape()[1]; }
  std::size_t out_width() const { return weights.shape()[0]; }
  std::size_t parameter_count() const { return weights.size() + biases.size(); }

  // Weights uniform in +-sqrt(1/in), biases zero.
  static DenseLayer random(std::size_t in, std::size_t out, Rng& rng);
};

Tensor dense_forward(const DenseLayer& layer, const Tensor& x);

// Classic product unit: y_k = prod_i x_i^exponents[k,i], evaluated as
// exp(sum_i exponents[k,i] * ln x_i). Only strictly positive inputs are in
// the domain.
struct ProductUnitLayer {
  Tensor exponents;  // [out x in]

  std::size_t in_width() const { return exponents.shape()[1]; }
  std::size_t out_width() const { return exponents.shape()[0]; }
  std::size_t parameter_count() const { return exponents.size(); }

  static ProductUnitLayer random(std::size_t in, std::size_t out, Rng& rng);
};

Tensor punn_forward(const ProductUnitLayer& layer, const Tensor& x);
NodeId product_unit(Tape& tape, NodeId x, NodeId exponents);

double sigmoid(double x);
Tensor sigmoid_forward(const Tensor& x);
Tensor sigmoid_backward(const Tensor& y, const Tensor& upstream);

Tensor tanh_forward(const Tensor& x);
Tensor tanh_backward(const Tensor& y, const Tensor& upstream);

inline constexpr double kDefaultLeakySlope = 0.1;
double leaky_relu(double x, double slope = kDefaultLeakySlope);
Tensor leaky_relu_forward(const Tensor& x, double slope = kDefaultLeakySlope);
Tensor leaky_relu_backward(const Tensor& x, const Tensor& upstream,
                           double slope = kDefaultLeakySlope);

// Row-wise x - log(sum(exp(x))), shifted by the row max.
Tensor log_softmax_forward(const Tensor& x);
Tensor log_softmax_backward(const Tensor& y, const Tensor& upstream);

NodeId sigmoid(Tape& tape, NodeId x);
NodeId tanh(Tape& tape, NodeId x);
NodeId leaky_relu(Tape& tape, NodeId x, double slope = kDefaultLeakySlope);
NodeId log_softmax(Tape& tape, NodeId x);
NodeId dense(Tape& tape, NodeId x, NodeId weights, NodeId biases);

}  // namespace wpunn
