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
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "wpunn/autodiff.hpp"
#include "wpunn/tensor.hpp"

namespace wpunn {

class Rng;

// Records a layer on the tape from its input nodes (data and parameters)
// and returns its output nodes.
using LayerBuilder = std::function<std::vector<NodeId>(Tape& tape, std::span<const NodeId> inputs)>;

// Checks every input of a layer with grad_check. The scalar objective is a
// fixed linear functional sum_i r_i y_i of the outputs, with r_i = u_i / |y_i|
// at the base point (u_i uniform in [0.5, 1.5]) so each output contributes on
// the same scale. Returns the worst relative error over all inputs.
//
// If corrupt is set, an identity node whose backward doubles the gradient is
// spliced onto every output; used as a negative control.
double check_layer_gradients(const LayerBuilder& layer, const std::vector<Tensor>& inputs, Rng& rng,
                             double step = 1e-5, bool corrupt = false);

// Tensor of the given shape with entries whose magnitude is uniform in
// [0.1, 2] and whose sign is random.
Tensor signed_away_from_zero(Rng& rng, Shape shape);

struct GradcheckOptions {
  std::uint64_t seed = 1;
  std::size_t trials = 20;
  double tolerance = 1e-6;
  double step = 1e-5;
  // Layer kind label whose backward is deliberately corrupted ("" = none).
  std::string corrupt_kind;
};

struct GradcheckRow {
  std::string kind;
  std::size_t trials = 0;
  double max_relative_error = 0.0;
  bool passed = false;
};

// One row per layer kind: dense, window-product(w,s) for (2,2) (2,1) (4,1)
// (4,4) (8,1), window-max, product-unit, sigmoid, tanh, leaky-relu,
// log-softmax, gated-block, lstm.
std::vector<GradcheckRow> run_layer_gradient_checks(const GradcheckOptions& options);

}  // namespace wpunn
