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

#include "wpunn/gradcheck_suite.hpp"

#include <algorithm>
#include <cmath>

#include "wpunn/layers.hpp"
#include "wpunn/recurrent.hpp"
#include "wpunn/rng.hpp"

namespace wpunn {

Tensor signed_away_from_zero(Rng& rng, Shape shape) {
  Tensor t(std::move(shape));
  for (double& v : t.mutable_data()) {
    const double magnitude = rng.uniform(0.1, 2.0);
    v = rng.below(2) ? magnitude : -magnitude;
  }
  return t;
}

namespace {

// signed_away_from_zero scaled by 1/sqrt(fan_in).
Tensor fan_in_scaled(Rng& rng, Shape shape, std::size_t fan_in) {
  Tensor t = signed_away_from_zero(rng, std::move(shape));
  return scale(t, 1.0 / std::sqrt(static_cast<double>(fan_in)));
}

NodeId corrupted(Tape& tape, NodeId x) {
  return tape.record(OpKind::Custom, {x}, tape.value(x), [x](Tape& t, NodeId self) {
    auto acc = t.adjoint_accumulator(x).mutable_data();
    const auto g = t.adjoint(self).data();
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += 2.0 * g[i];
  });
}

}  // namespace

double check_layer_gradients(const LayerBuilder& layer, const std::vector<Tensor>& inputs, Rng& rng,
                             double step, bool corrupt) {
  std::vector<Tensor> weights;
  {
    Tape tape;
    std::vector<NodeId> ids;
    for (const auto& in : inputs) ids.push_back(tape.leaf(in));
    for (const NodeId out : layer(tape, ids)) {
      Tensor r = Tensor::zeros_like(tape.value(out));
      for (std::size_t i = 0; i < r.size(); ++i) {
        r[i] = rng.uniform(0.5, 1.5) / std::max(std::abs(tape.value(out)[i]), 1e-12);
      }
      weights.push_back(std::move(r));
    }
  }

  double worst = 0.0;
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    const ScalarFunction f = [&](Tape& tape, NodeId probe) {
      std::vector<NodeId> ids;
      for (std::size_t j = 0; j < inputs.size(); ++j) {
        ids.push_back(j == k ? probe : tape.leaf(inputs[j]));
      }
      const auto outs = layer(tape, ids);
      std::vector<NodeId> terms;
      for (std::size_t o = 0; o < outs.size(); ++o) {
        const NodeId y = corrupt ? corrupted(tape, outs[o]) : outs[o];
        terms.push_back(sum(tape, multiply(tape, y, tape.leaf(weights[o]))));
      }
      return add_n(tape, terms);
    };
    worst = std::max(worst, grad_check(f, inputs[k], step));
  }
  return worst;
}

std::vector<GradcheckRow> run_layer_gradient_checks(const GradcheckOptions& options) {
  struct Case {
    std::string kind;
    std::function<std::pair<LayerBuilder, std::vector<Tensor>>(Rng&)> make;
  };

  std::vector<Case> cases;
  cases.push_back({"dense", [](Rng& rng) {
                     const LayerBuilder b = [](Tape& t, std::span<const NodeId> in) {
                       return std::vector<NodeId>{dense(t, in[0], in[1], in[2])};
                     };
                     return std::pair{b, std::vector<Tensor>{signed_away_from_zero(rng, {3, 5}),
                                                             signed_away_from_zero(rng, {4, 5}),
                                                             signed_away_from_zero(rng, {4})}};
                   }});
  for (const auto& [w, s] : std::vector<std::pair<std::size_t, std::size_t>>{
           {2, 2}, {2, 1}, {4, 1}, {4, 4}, {8, 1}}) {
    cases.push_back({"window-product(" + std::to_string(w) + "," + std::to_string(s) + ")",
                     [w, s](Rng& rng) {
                       const WindowConfig cfg{w, s, Aggregator::Product};
                       const LayerBuilder b = [cfg](Tape& t, std::span<const NodeId> in) {
                         return std::vector<NodeId>{window(t, in[0], cfg)};
                       };
                       return std::pair{b, std::vector<Tensor>{
                                               signed_away_from_zero(rng, {2, 2 * w + 4})}};
                     }});
  }
  cases.push_back({"window-max", [](Rng& rng) {
                     const WindowConfig cfg{3, 2, Aggregator::Max};
                     const LayerBuilder b = [cfg](Tape& t, std::span<const NodeId> in) {
                       return std::vector<NodeId>{window(t, in[0], cfg)};
                     };
                     return std::pair{b, std::vector<Tensor>{signed_away_from_zero(rng, {2, 11})}};
                   }});
  cases.push_back({"product-unit", [](Rng& rng) {
                     const LayerBuilder b = [](Tape& t, std::span<const NodeId> in) {
                       return std::vector<NodeId>{product_unit(t, in[0], in[1])};
                     };
                     return std::pair{b, std::vector<Tensor>{uniform(rng, Shape{2, 4}, 0.1, 2.0),
                                                             uniform(rng, Shape{3, 4}, -1.0, 1.0)}};
                   }});
  cases.push_back({"sigmoid", [](Rng& rng) {
                     const LayerBuilder b = [](Tape& t, std::span<const NodeId> in) {
                       return std::vector<NodeId>{sigmoid(t, in[0])};
                     };
                     return std::pair{b, std::vector<Tensor>{signed_away_from_zero(rng, {2, 6})}};
                   }});
  cases.push_back({"tanh", [](Rng& rng) {
                     const LayerBuilder b = [](Tape& t, std::span<const NodeId> in) {
                       return std::vector<NodeId>{tanh(t, in[0])};
                     };
                     return std::pair{b, std::vector<Tensor>{signed_away_from_zero(rng, {2, 6})}};
                   }});
  cases.push_back({"leaky-relu", [](Rng& rng) {
                     const LayerBuilder b = [](Tape& t, std::span<const NodeId> in) {
                       return std::vector<NodeId>{leaky_relu(t, in[0], 0.1)};
                     };
                     return std::pair{b, std::vector<Tensor>{signed_away_from_zero(rng, {2, 6})}};
                   }});
  cases.push_back({"log-softmax", [](Rng& rng) {
                     const LayerBuilder b = [](Tape& t, std::span<const NodeId> in) {
                       return std::vector<NodeId>{log_softmax(t, in[0])};
                     };
                     return std::pair{b, std::vector<Tensor>{signed_away_from_zero(rng, {2, 6})}};
                   }});
  cases.push_back({"gated-block", [](Rng& rng) {
                     const LayerBuilder b = [](Tape& t, std::span<const NodeId> in) {
                       return std::vector<NodeId>{gated_block(t, in[0], in[1], in[2], in[3])};
                     };
                     constexpr std::size_t in = 3, out = 4;
                     return std::pair{
                         b, std::vector<Tensor>{signed_away_from_zero(rng, {in}),
                                                uniform(rng, Shape{out}, 0.05, 0.95),
                                                fan_in_scaled(rng, {2 * out, in + out}, in + out),
                                                fan_in_scaled(rng, {2 * out}, in + out)}};
                   }});
  cases.push_back({"lstm", [](Rng& rng) {
                     const LayerBuilder b = [](Tape& t, std::span<const NodeId> in) {
                       const auto next = lstm(t, in[0], {in[1], in[2]},
                                              std::span<const NodeId, 8>(in.subspan(3, 8)));
                       return std::vector<NodeId>{next.hidden, next.cell};
                     };
                     constexpr std::size_t in = 3, hidden = 4;
                     std::vector<Tensor> inputs{signed_away_from_zero(rng, {in}),
                                                signed_away_from_zero(rng, {hidden}),
                                                signed_away_from_zero(rng, {hidden})};
                     for (int g = 0; g < 4; ++g) {
                       inputs.push_back(fan_in_scaled(rng, {hidden, in + hidden}, in + hidden));
                       inputs.push_back(fan_in_scaled(rng, {hidden}, in + hidden));
                     }
                     return std::pair{b, std::move(inputs)};
                   }});

  std::vector<GradcheckRow> rows;
  for (const auto& c : cases) {
    Rng rng(derive_seed(options.seed, c.kind));
    GradcheckRow row{c.kind, options.trials, 0.0, false};
    const bool corrupt = !options.corrupt_kind.empty() && options.corrupt_kind == c.kind;
    for (std::size_t trial = 0; trial < options.trials; ++trial) {
      const auto [builder, inputs] = c.make(rng);
      row.max_relative_error = std::max(
          row.max_relative_error, check_layer_gradients(builder, inputs, rng, options.step, corrupt));
    }
    row.passed = row.max_relative_error <= options.tolerance;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace wpunn
