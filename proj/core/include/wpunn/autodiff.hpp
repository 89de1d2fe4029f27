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
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "wpunn/tensor.hpp"

namespace wpunn {

using NodeId = std::size_t;

enum class OpKind {
  Leaf,
  Add,
  Subtract,
  Multiply,
  Scale,
  Sum,
  Concat,
  Affine,
  Window,
  ProductUnit,
  Sigmoid,
  Tanh,
  LeakyRelu,
  LogSoftmax,
  NllLoss,
  MseLoss,
  Custom,
};

std::string_view to_string(OpKind kind);

class Tape;

// Called once per reachable node during backward, in reverse append order.
// Reads tape.adjoint(self) and accumulates into the parents via
// tape.adjoint_accumulator().
using BackwardFn = std::function<void(Tape& tape, NodeId self)>;

// Append-only record of a forward computation.
//
// Nodes are appended in evaluation order, so parents always precede their
// children and a reverse sweep is a valid topological order. A tape is
// differentiated at most once; build a fresh tape for every forward pass.
class Tape {
 public:
  NodeId leaf(Tensor value);
  NodeId record(OpKind kind, std::vector<NodeId> parents, Tensor value, BackwardFn backward);

  const Tensor& value(NodeId id) const { return nodes_.at(id).value; }
  const Tensor& adjoint(NodeId id) const { return nodes_.at(id).adjoint; }
  OpKind kind(NodeId id) const { return nodes_.at(id).kind; }
  const std::vector<NodeId>& parents(NodeId id) const { return nodes_.at(id).parents; }
  std::size_t size() const { return nodes_.size(); }
  bool differentiated() const { return differentiated_; }

  // Mutable adjoint of a parent node, for use inside a BackwardFn.
  Tensor& adjoint_accumulator(NodeId id) { return nodes_.at(id).adjoint; }

  // Seeds d(root)/d(root) = 1 and propagates to every node root depends on.
  // root must hold a single value of shape [1]. Throws ContractError when
  // called a second time on the same tape.
  void backward(NodeId root);

 private:
  struct Node {
    OpKind kind;
    std::vector<NodeId> parents;
    Tensor value;
    Tensor adjoint;
    BackwardFn backward;
  };

  std::vector<Node> nodes_;
  bool differentiated_ = false;
};

// Differentiable primitives. Shapes follow the tensor-core functions of the
// same name; binary ops require equal shapes.
NodeId add(Tape& tape, NodeId a, NodeId b);
NodeId subtract(Tape& tape, NodeId a, NodeId b);
NodeId multiply(Tape& tape, NodeId a, NodeId b);
NodeId scale(Tape& tape, NodeId a, double factor);
// Sum of all elements -> [1].
NodeId sum(Tape& tape, NodeId a);
// Element-wise sum of equally shaped nodes.
NodeId add_n(Tape& tape, std::span<const NodeId> terms);
NodeId concat_cols(Tape& tape, NodeId a, NodeId b);
// x . weights^T + biases, x [in] or [batch x in], weights [out x in], biases [out].
NodeId affine(Tape& tape, NodeId x, NodeId weights, NodeId biases);

// Scalar-valued function of one tensor input, recorded on a tape.
using ScalarFunction = std::function<NodeId(Tape& tape, NodeId input)>;

// Max over coordinates of
//   |analytic - central| / max(|analytic|, |central|, 1e-8)
// where central = (f(p + h e_i) - f(p - h e_i)) / 2h. Throws NumericError when
// f is not finite at a perturbed point.
double grad_check(const ScalarFunction& f, const Tensor& point, double step = 1e-5);
// Same, restricted to the listed flat coordinates of point.
double grad_check(const ScalarFunction& f, const Tensor& point, double step,
                  std::span<const std::size_t> coordinates);

// Gradient of f at point computed through the tape.
Tensor gradient(const ScalarFunction& f, const Tensor& point);

}  // namespace wpunn
