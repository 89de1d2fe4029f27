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

#include "wpunn/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "wpunn/error.hpp"

namespace wpunn {

std::string_view to_string(OpKind kind) {
  switch (kind) {
    case OpKind::Leaf: return "leaf";
    case OpKind::Add: return "add";
    case OpKind::Subtract: return "subtract";
    case OpKind::Multiply: return "multiply";
    case OpKind::Scale: return "scale";
    case OpKind::Sum: return "sum";
    case OpKind::Concat: return "concat";
    case OpKind::Affine: return "affine";
    case OpKind::Window: return "window";
    case OpKind::ProductUnit: return "product-unit";
    case OpKind::Sigmoid: return "sigmoid";
    case OpKind::Tanh: return "tanh";
    case OpKind::LeakyRelu: return "leaky-relu";
    case OpKind::LogSoftmax: return "log-softmax";
    case OpKind::NllLoss: return "nll-loss";
    case OpKind::MseLoss: return "mse-loss";
    case OpKind::Custom: return "custom";
  }
  return "unknown";
}

NodeId Tape::leaf(Tensor value) { return record(OpKind::Leaf, {}, std::move(value), nullptr); }

NodeId Tape::record(OpKind kind, std::vector<NodeId> parents, Tensor value, BackwardFn backward) {
  const NodeId id = nodes_.size();
  for (const NodeId p : parents) {
    if (p >= id) {
      throw ContractError("tape: parent " + std::to_string(p) + " does not precede node " +
                          std::to_string(id));
    }
  }
  Tensor adjoint = Tensor::zeros_like(value);
  nodes_.push_back({kind, std::move(parents), std::move(value), std::move(adjoint),
                    std::move(backward)});
  return id;
}

void Tape::backward(NodeId root) {
  if (differentiated_) {
    throw ContractError("tape: backward already ran; record a fresh tape per forward pass");
  }
  const Node& r = nodes_.at(root);
  if (r.value.rank() != 1 || r.value.size() != 1) {
    throw ContractError("tape: backward root must have shape [1], got " +
                        shape_string(r.value.shape()));
  }
  differentiated_ = true;

  std::vector<char> reached(root + 1, 0);
  reached[root] = 1;
  nodes_[root].adjoint[0] = 1.0;
  for (NodeId id = root + 1; id-- > 0;) {
    if (!reached[id]) continue;
    Node& node = nodes_[id];
    for (const NodeId p : node.parents) reached[p] = 1;
    if (node.backward) node.backward(*this, id);
  }
}

namespace {

void accumulate(Tensor& dst, const Tensor& src, double factor = 1.0) {
  auto d = dst.mutable_data();
  const auto s = src.data();
  for (std::size_t i = 0; i < d.size(); ++i) d[i] += factor * s[i];
}

void require_same_shape(const Tape& tape, NodeId a, NodeId b, const char* op) {
  if (tape.value(a).shape() != tape.value(b).shape()) {
    throw DimensionError(std::string(op) + ": shape mismatch " +
                         shape_string(tape.value(a).shape()) + " vs " +
                         shape_string(tape.value(b).shape()));
  }
}

}  // namespace

NodeId add(Tape& tape, NodeId a, NodeId b) {
  require_same_shape(tape, a, b, "add");
  return tape.record(OpKind::Add, {a, b}, wpunn::add(tape.value(a), tape.value(b)),
                     [a, b](Tape& t, NodeId self) {
                       accumulate(t.adjoint_accumulator(a), t.adjoint(self));
                       accumulate(t.adjoint_accumulator(b), t.adjoint(self));
                     });
}

NodeId subtract(Tape& tape, NodeId a, NodeId b) {
  require_same_shape(tape, a, b, "subtract");
  return tape.record(OpKind::Subtract, {a, b}, wpunn::subtract(tape.value(a), tape.value(b)),
                     [a, b](Tape& t, NodeId self) {
                       accumulate(t.adjoint_accumulator(a), t.adjoint(self));
                       accumulate(t.adjoint_accumulator(b), t.adjoint(self), -1.0);
                     });
}

NodeId multiply(Tape& tape, NodeId a, NodeId b) {
  require_same_shape(tape, a, b, "multiply");
  return tape.record(OpKind::Multiply, {a, b}, hadamard(tape.value(a), tape.value(b)),
                     [a, b](Tape& t, NodeId self) {
                       const auto& g = t.adjoint(self);
                       accumulate(t.adjoint_accumulator(a), hadamard(g, t.value(b)));
                       accumulate(t.adjoint_accumulator(b), hadamard(g, t.value(a)));
                     });
}

NodeId scale(Tape& tape, NodeId a, double factor) {
  return tape.record(OpKind::Scale, {a}, wpunn::scale(tape.value(a), factor),
                     [a, factor](Tape& t, NodeId self) {
                       accumulate(t.adjoint_accumulator(a), t.adjoint(self), factor);
                     });
}

NodeId sum(Tape& tape, NodeId a) {
  double total = 0.0;
  for (const double v : tape.value(a).data()) total += v;
  return tape.record(OpKind::Sum, {a}, Tensor::vector({total}), [a](Tape& t, NodeId self) {
    const double g = t.adjoint(self)[0];
    for (double& v : t.adjoint_accumulator(a).mutable_data()) v += g;
  });
}

NodeId add_n(Tape& tape, std::span<const NodeId> terms) {
  if (terms.empty()) throw ArgumentError("add_n: no terms");
  Tensor total = tape.value(terms[0]);
  for (std::size_t i = 1; i < terms.size(); ++i) {
    require_same_shape(tape, terms[0], terms[i], "add_n");
    accumulate(total, tape.value(terms[i]));
  }
  std::vector<NodeId> parents(terms.begin(), terms.end());
  return tape.record(OpKind::Add, parents, std::move(total), [parents](Tape& t, NodeId self) {
    for (const NodeId p : parents) accumulate(t.adjoint_accumulator(p), t.adjoint(self));
  });
}

NodeId concat_cols(Tape& tape, NodeId a, NodeId b) {
  return tape.record(
      OpKind::Concat, {a, b}, wpunn::concat_cols(tape.value(a), tape.value(b)),
      [a, b](Tape& t, NodeId self) {
        const auto& g = t.adjoint(self);
        auto& ga = t.adjoint_accumulator(a);
        auto& gb = t.adjoint_accumulator(b);
        const std::size_t na = ga.cols();
        for (std::size_t r = 0; r < g.rows(); ++r) {
          const auto src = g.row(r);
          auto da = ga.mutable_row(r);
          auto db = gb.mutable_row(r);
          for (std::size_t c = 0; c < na; ++c) da[c] += src[c];
          for (std::size_t c = 0; c < db.size(); ++c) db[c] += src[na + c];
        }
      });
}

NodeId affine(Tape& tape, NodeId x, NodeId weights, NodeId biases) {
  const Tensor& xv = tape.value(x);
  const Tensor& w = tape.value(weights);
  const Tensor& b = tape.value(biases);
  if (w.rank() != 2 || b.rank() != 1 || b.size() != w.shape()[0] || xv.cols() != w.shape()[1]) {
    throw DimensionError("affine: input " + shape_string(xv.shape()) + " incompatible with weights " +
                         shape_string(w.shape()) + " and biases " + shape_string(b.shape()));
  }
  const std::size_t out_width = w.shape()[0];
  Tensor y = xv.rank() == 1 ? Tensor({out_width}) : Tensor({xv.rows(), out_width});
  for (std::size_t r = 0; r < y.rows(); ++r) {
    std::ranges::copy(b.data(), y.mutable_row(r).begin());
  }
  gemm(false, true, 1.0, xv, w, 1.0, y);
  return tape.record(OpKind::Affine, {x, weights, biases}, std::move(y),
                     [x, weights, biases](Tape& t, NodeId self) {
                       const Tensor& g = t.adjoint(self);
                       gemm(false, false, 1.0, g, t.value(weights), 1.0, t.adjoint_accumulator(x));
                       gemm(true, false, 1.0, g, t.value(x), 1.0,
                            t.adjoint_accumulator(weights));
                       auto db = t.adjoint_accumulator(biases).mutable_data();
                       for (std::size_t r = 0; r < g.rows(); ++r) {
                         const auto gr = g.row(r);
                         for (std::size_t c = 0; c < db.size(); ++c) db[c] += gr[c];
                       }
                     });
}

Tensor gradient(const ScalarFunction& f, const Tensor& point) {
  Tape tape;
  const NodeId input = tape.leaf(point);
  const NodeId root = f(tape, input);
  tape.backward(root);
  return tape.adjoint(input);
}

double grad_check(const ScalarFunction& f, const Tensor& point, double step) {
  std::vector<std::size_t> all(point.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return grad_check(f, point, step, all);
}

double grad_check(const ScalarFunction& f, const Tensor& point, double step,
                  std::span<const std::size_t> coordinates) {
  if (!(step > 0.0)) throw ArgumentError("grad_check: step must be positive");
  const Tensor analytic = gradient(f, point);

  auto evaluate = [&](const Tensor& p) {
    Tape tape;
    const NodeId root = f(tape, tape.leaf(p));
    const Tensor& v = tape.value(root);
    if (v.size() != 1) {
      throw ContractError("grad_check: function must be scalar, got " + shape_string(v.shape()));
    }
    if (!std::isfinite(v[0])) throw NumericError("grad_check: function is not finite near point");
    return v[0];
  };

  double worst = 0.0;
  Tensor probe = point;
  for (const std::size_t i : coordinates) {
    if (i >= point.size()) throw ArgumentError("grad_check: coordinate out of range");
    probe[i] = point[i] + step;
    const double up = evaluate(probe);
    probe[i] = point[i] - step;
    const double down = evaluate(probe);
    probe[i] = point[i];
    const double central = (up - down) / (2.0 * step);
    const double denom = std::max({std::abs(analytic[i]), std::abs(central), 1e-8});
    worst = std::max(worst, std::abs(analytic[i] - central) / denom);
  }
  return worst;
}

}  // namespace wpunn
