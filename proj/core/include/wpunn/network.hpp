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
#include <istream>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wpunn/autodiff.hpp"
#include "wpunn/layers.hpp"
#include "wpunn/tensor.hpp"

namespace wpunn {

class Rng;

enum class LayerKind { Dense, Window, ProductUnit, Sigmoid, Tanh, LeakyRelu, LogSoftmax, Lstm };

std::string_view to_string(LayerKind kind);
LayerKind parse_layer_kind(std::string_view text);

struct LayerDesc {
  LayerKind kind = LayerKind::Dense;
  // Output width of dense, product-unit and lstm layers. Other kinds derive
  // their width from the input.
  std::size_t width = 0;
  WindowConfig window{};
  double slope = kDefaultLeakySlope;
  // 1-based index of a dense layer that receives this layer's previous-step
  // output appended to its regular input.
  std::optional<std::size_t> recurrent_target;

  bool operator==(const LayerDesc&) const = default;
};

// Ordered layer list plus the input width.
//
// Text form, one item per line, `#` starts a comment:
//
//   input width=2
//   dense width=50
//   window w=2 s=2 agg=product
//   leaky-relu slope=0.1
//   window w=2 s=2 recur=1
//   lstm width=100
//   log-softmax
//
// Kinds: dense, window, product-unit, sigmoid, tanh, leaky-relu, log-softmax,
// lstm. `recur=k` feeds the layer's output at t-1 into layer k (1-based,
// counting from the first line after `input`).
struct NetworkSpec {
  std::size_t input_width = 0;
  std::vector<LayerDesc> layers;

  bool operator==(const NetworkSpec&) const = default;
};

NetworkSpec parse_network_spec(std::string_view text);
std::string to_text(const NetworkSpec& spec);

struct LayerShape {
  std::size_t in = 0;   // including recurrent feeds
  std::size_t out = 0;
};

// Validates widths and recurrent wiring; throws ConfigError on any mismatch.
std::vector<LayerShape> resolve_shapes(const NetworkSpec& spec);
std::size_t count_parameters(const NetworkSpec& spec);
bool is_recurrent(const NetworkSpec& spec);

inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

// Recurrent values carried between time steps, one slot per layer.
struct RecurrentState {
  std::vector<Tensor> feedback;  // outputs of recurrent source layers
  std::vector<Tensor> hidden;    // lstm h
  std::vector<Tensor> cell;      // lstm c
};

// The same state living on a tape.
struct TapeState {
  std::vector<NodeId> feedback;
  std::vector<NodeId> hidden;
  std::vector<NodeId> cell;
};

class Network {
 public:
  // Random initialisation: dense and lstm weights uniform in +-sqrt(1/fan_in),
  // biases zero (lstm forget gate 1), product-unit exponents likewise.
  Network(NetworkSpec spec, Rng& rng);
  // Explicit parameters, in parameter_names() order.
  Network(NetworkSpec spec, std::vector<Tensor> parameters);

  const NetworkSpec& spec() const { return spec_; }
  const std::vector<LayerShape>& shapes() const { return shapes_; }
  std::size_t input_width() const { return spec_.input_width; }
  std::size_t output_width() const { return shapes_.back().out; }

  std::span<Tensor> parameters() { return params_; }
  std::span<const Tensor> parameters() const { return params_; }
  const std::vector<std::string>& parameter_names() const { return names_; }
  std::size_t parameter_count() const;
  bool recurrent() const { return recurrent_; }

  // Places every parameter on the tape as a leaf.
  std::vector<NodeId> bind(Tape& tape) const;

  // Records one forward step. state is required for recurrent networks and
  // is advanced in place.
  NodeId forward(Tape& tape, std::span<const NodeId> params, NodeId input,
                 TapeState* state = nullptr) const;

  // Inference for feed-forward networks, [in] or [batch x in].
  Tensor predict(const Tensor& input) const;

  RecurrentState initial_state() const;
  TapeState attach(Tape& tape, const RecurrentState& state) const;
  RecurrentState detach(const Tape& tape, const TapeState& state) const;
  // One recurrent inference step on a rank-1 input.
  Tensor step(const Tensor& input, RecurrentState& state) const;

 private:
  void index_parameters();

  NetworkSpec spec_;
  std::vector<LayerShape> shapes_;
  std::vector<Tensor> params_;
  std::vector<std::string> names_;
  std::vector<std::size_t> first_param_;          // per layer offset into params_
  std::vector<std::vector<std::size_t>> feeds_;   // per layer, source layer indices
  bool recurrent_ = false;
};

}  // namespace wpunn
