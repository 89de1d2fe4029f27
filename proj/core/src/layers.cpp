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

#include "wpunn/layers.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "wpunn/error.hpp"
#include "wpunn/rng.hpp"

namespace wpunn {

std::string_view to_string(Aggregator aggregator) {
  return aggregator == Aggregator::Product ? "product" : "max";
}

Aggregator parse_aggregator(std::string_view text) {
  if (text == "product") return Aggregator::Product;
  if (text == "max") return Aggregator::Max;
  throw ConfigError("unknown window aggregator '" + std::string(text) + "'");
}

std::size_t output_width(std::size_t n, const WindowConfig& cfg) {
  if (cfg.stride < 1 || cfg.stride > cfg.window || cfg.window > n) {
    throw ConfigError("window config requires 1 <= s <= w <= N, got N=" + std::to_string(n) +
                      " w=" + std::to_string(cfg.window) + " s=" + std::to_string(cfg.stride));
  }
  return (n - cfg.window) / cfg.stride + 1;
}

Tensor windowed_forward(const Tensor& x, const WindowConfig& cfg) {
  const std::size_t n = x.cols();
  const std::size_t m = output_width(n, cfg);
  Tensor y = x.rank() == 1 ? Tensor({m}) : Tensor({x.rows(), m});
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const auto in = x.row(r);
    auto out = y.mutable_row(r);
    for (const double v : in) {
      if (!std::isfinite(v)) throw NumericError("window: non-finite input");
    }
    for (std::size_t i = 0; i < m; ++i) {
      const auto win = in.subspan(i * cfg.stride, cfg.window);
      double acc = win[0];
      if (cfg.aggregator == Aggregator::Product) {
        for (std::size_t j = 1; j < win.size(); ++j) acc *= win[j];
        if (!(std::abs(acc) <= kWindowProductLimit)) {
          throw NumericError("window: product magnitude exceeds 1e150 at output " +
                             std::to_string(i) + " (w=" + std::to_string(cfg.window) + ")");
        }
      } else {
        for (std::size_t j = 1; j < win.size(); ++j) acc = std::max(acc, win[j]);
      }
      out[i] = acc;
    }
  }
  return y;
}

Tensor windowed_backward(const Tensor& x, const WindowConfig& cfg, const Tensor& upstream) {
  const std::size_t m = output_width(x.cols(), cfg);
  if (upstream.rows() != x.rows() || upstream.cols() != m) {
    throw DimensionError("window backward: upstream " + shape_string(upstream.shape()) +
                         " does not match forward output for input " + shape_string(x.shape()));
  }
  Tensor grad = Tensor::zeros_like(x);
  std::vector<double> prefix(cfg.window);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const auto in = x.row(r);
    const auto up = upstream.row(r);
    auto g = grad.mutable_row(r);
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t start = i * cfg.stride;
      if (cfg.aggregator == Aggregator::Max) {
        std::size_t best = start;
        for (std::size_t j = start + 1; j < start + cfg.window; ++j) {
          if (in[j] > in[best]) best = j;
        }
        g[best] += up[i];
        continue;
      }
      double running = 1.0;
      for (std::size_t k = 0; k < cfg.window; ++k) {
        prefix[k] = running;
        running *= in[start + k];
      }
      double suffix = 1.0;
      for (std::size_t k = cfg.window; k-- > 0;) {
        g[start + k] += up[i] * prefix[k] * suffix;
        suffix *= in[start + k];
      }
    }
  }
  return grad;
}

namespace {

void accumulate(Tensor& dst, const Tensor& src) {
  auto d = dst.mutable_data();
  const auto s = src.data();
  for (std::size_t i = 0; i < d.size(); ++i) d[i] += s[i];
}

template <typename Fn>
Tensor map(const Tensor& x, Fn fn) {
  Tensor y = Tensor::zeros_like(x);
  auto out = y.mutable_data();
  const auto in = x.data();
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = fn(in[i]);
  return y;
}

template <typename Fn>
Tensor map2(const Tensor& a, const Tensor& b, Fn fn) {
  if (a.shape() != b.shape()) {
    throw DimensionError("activation backward: shape mismatch " + shape_string(a.shape()) +
                         " vs " + shape_string(b.shape()));
  }
  Tensor y = Tensor::zeros_like(a);
  auto out = y.mutable_data();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = fn(a[i], b[i]);
  return y;
}

}  // namespace

NodeId window(Tape& tape, NodeId x, const WindowConfig& cfg) {
  return tape.record(OpKind::Window, {x}, windowed_forward(tape.value(x), cfg),
                     [x, cfg](Tape& t, NodeId self) {
                       accumulate(t.adjoint_accumulator(x),
                                  windowed_backward(t.value(x), cfg, t.adjoint(self)));
                     });
}

DenseLayer DenseLayer::random(std::size_t in, std::size_t out, Rng& rng) {
  const double limit = std::sqrt(1.0 / static_cast<double>(in));
  return {uniform(rng, Shape{out, in}, -limit, limit), Tensor({out})};
}

Tensor dense_forward(const DenseLayer& layer, const Tensor& x) {
  if (x.cols() != layer.in_width() || layer.biases.size() != layer.out_width()) {
    throw DimensionError("dense: input " + shape_string(x.shape()) + " incompatible with weights " +
                         shape_string(layer.weights.shape()));
  }
  Tape tape;
  const NodeId out = dense(tape, tape.leaf(x), tape.leaf(layer.weights), tape.leaf(layer.biases));
  return tape.value(out);
}

ProductUnitLayer ProductUnitLayer::random(std::size_t in, std::size_t out, Rng& rng) {
  const double limit = std::sqrt(1.0 / static_cast<double>(in));
  return {uniform(rng, Shape{out, in}, -limit, limit)};
}

namespace {

Tensor product_unit_values(const Tensor& x, const Tensor& exponents) {
  if (exponents.rank() != 2 || x.cols() != exponents.shape()[1]) {
    throw DimensionError("product unit: input " + shape_string(x.shape()) +
                         " incompatible with exponents " + shape_string(exponents.shape()));
  }
  const std::size_t out_width = exponents.shape()[0];
  Tensor y = x.rank() == 1 ? Tensor({out_width}) : Tensor({x.rows(), out_width});
  std::vector<double> logs(x.cols());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const auto in = x.row(r);
    for (std::size_t i = 0; i < in.size(); ++i) {
      if (!(in[i] > 0.0) || !std::isfinite(in[i])) {
        throw DomainError("product unit: inputs must be strictly positive, got x[" +
                          std::to_string(i) + "]=" + std::to_string(in[i]));
      }
      logs[i] = std::log(in[i]);
    }
    auto out = y.mutable_row(r);
    for (std::size_t k = 0; k < out_width; ++k) {
      const auto theta = exponents.row(k);
      double s = 0.0;
      for (std::size_t i = 0; i < logs.size(); ++i) s += theta[i] * logs[i];
      out[k] = std::exp(s);
    }
  }
  return y;
}

}  // namespace

Tensor punn_forward(const ProductUnitLayer& layer, const Tensor& x) {
  return product_unit_values(x, layer.exponents);
}

NodeId product_unit(Tape& tape, NodeId x, NodeId exponents) {
  return tape.record(
      OpKind::ProductUnit, {x, exponents},
      product_unit_values(tape.value(x), tape.value(exponents)),
      [x, exponents](Tape& t, NodeId self) {
        const Tensor& xv = t.value(x);
        const Tensor& theta = t.value(exponents);
        const Tensor& y = t.value(self);
        const Tensor& g = t.adjoint(self);
        Tensor& gx = t.adjoint_accumulator(x);
        Tensor& gtheta = t.adjoint_accumulator(exponents);
        for (std::size_t r = 0; r < xv.rows(); ++r) {
          const auto in = xv.row(r);
          const auto yr = y.row(r);
          const auto gr = g.row(r);
          auto gxr = gx.mutable_row(r);
          for (std::size_t k = 0; k < yr.size(); ++k) {
            const double gy = gr[k] * yr[k];
            const auto th = theta.row(k);
            auto gth = gtheta.mutable_row(k);
            for (std::size_t i = 0; i < in.size(); ++i) {
              gxr[i] += gy * th[i] / in[i];
              gth[i] += gy * std::log(in[i]);
            }
          }
        }
      });
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

Tensor sigmoid_forward(const Tensor& x) { return map(x, [](double v) { return sigmoid(v); }); }

Tensor sigmoid_backward(const Tensor& y, const Tensor& upstream) {
  return map2(y, upstream, [](double s, double g) { return g * s * (1.0 - s); });
}

Tensor tanh_forward(const Tensor& x) { return map(x, [](double v) { return std::tanh(v); }); }

Tensor tanh_backward(const Tensor& y, const Tensor& upstream) {
  return map2(y, upstream, [](double t, double g) { return g * (1.0 - t * t); });
}

double leaky_relu(double x, double slope) { return x > 0.0 ? x : slope * x; }

Tensor leaky_relu_forward(const Tensor& x, double slope) {
  return map(x, [slope](double v) { return leaky_relu(v, slope); });
}

Tensor leaky_relu_backward(const Tensor& x, const Tensor& upstream, double slope) {
  return map2(x, upstream, [slope](double v, double g) { return v > 0.0 ? g : slope * g; });
}

Tensor log_softmax_forward(const Tensor& x) {
  Tensor y = Tensor::zeros_like(x);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const auto in = x.row(r);
    auto out = y.mutable_row(r);
    if (in.empty()) continue;
    const double peak = *std::ranges::max_element(in);
    double total = 0.0;
    for (const double v : in) total += std::exp(v - peak);
    const double log_norm = peak + std::log(total);
    for (std::size_t i = 0; i < in.size(); ++i) out[i] = in[i] - log_norm;
  }
  return y;
}

Tensor log_softmax_backward(const Tensor& y, const Tensor& upstream) {
  Tensor grad = Tensor::zeros_like(y);
  for (std::size_t r = 0; r < y.rows(); ++r) {
    const auto yr = y.row(r);
    const auto gr = upstream.row(r);
    double total = 0.0;
    for (const double g : gr) total += g;
    auto out = grad.mutable_row(r);
    for (std::size_t i = 0; i < yr.size(); ++i) out[i] = gr[i] - std::exp(yr[i]) * total;
  }
  return grad;
}

NodeId sigmoid(Tape& tape, NodeId x) {
  return tape.record(OpKind::Sigmoid, {x}, sigmoid_forward(tape.value(x)),
                     [x](Tape& t, NodeId self) {
                       accumulate(t.adjoint_accumulator(x),
                                  sigmoid_backward(t.value(self), t.adjoint(self)));
                     });
}

NodeId tanh(Tape& tape, NodeId x) {
  return tape.record(OpKind::Tanh, {x}, tanh_forward(tape.value(x)), [x](Tape& t, NodeId self) {
    accumulate(t.adjoint_accumulator(x), tanh_backward(t.value(self), t.adjoint(self)));
  });
}

NodeId leaky_relu(Tape& tape, NodeId x, double slope) {
  return tape.record(OpKind::LeakyRelu, {x}, leaky_relu_forward(tape.value(x), slope),
                     [x, slope](Tape& t, NodeId self) {
                       accumulate(t.adjoint_accumulator(x),
                                  leaky_relu_backward(t.value(x), t.adjoint(self), slope));
                     });
}

NodeId log_softmax(Tape& tape, NodeId x) {
  return tape.record(OpKind::LogSoftmax, {x}, log_softmax_forward(tape.value(x)),
                     [x](Tape& t, NodeId self) {
                       accumulate(t.adjoint_accumulator(x),
                                  log_softmax_backward(t.value(self), t.adjoint(self)));
                     });
}

NodeId dense(Tape& tape, NodeId x, NodeId weights, NodeId biases) {
  return affine(tape, x, weights, biases);
}

}  // namespace wpunn
