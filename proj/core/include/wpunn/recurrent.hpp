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

#include <array>
#include <cstddef>
#include <span>

#include "wpunn/autodiff.hpp"
#include "wpunn/layers.hpp"
#include "wpunn/tensor.hpp"

namespace wpunn {

class Rng;

// Gated unit built from plain layers: concat(x_t, y_{t-1}) -> dense to 2N ->
// sigmoid -> windowed product with w = s = 2. Each output is the product of an
// adjacent (signal, gate) pair, so it lies in (0, 1).
struct GatedBlock {
  DenseLayer dense;  // [(in + N) -> 2N]
  Tensor state;      // [N], previous output

  static GatedBlock random(std::size_t in, std::size_t out, Rng& rng);
  explicit GatedBlock(DenseLayer layer);

  std::size_t out_width() const { return dense.out_width() / 2; }
  std::size_t in_width() const { return dense.in_width() - out_width(); }
  void reset();
};

inline constexpr WindowConfig kGateWindow{2, 2, Aggregator::Product};

// Advances the block by one time step and returns the new output (also
// stored as block.state).
Tensor gated_block_step(GatedBlock& block, const Tensor& x_t);

// Tape form of one step; prev is y_{t-1}.
NodeId gated_block(Tape& tape, NodeId x, NodeId prev, NodeId weights, NodeId biases);

// Standard LSTM cell without peepholes:
//   i = sig(W_i [x, h] + b_i), f = sig(W_f [x, h] + b_f), o = sig(W_o [x, h] + b_o)
//   g = tanh(W_g [x, h] + b_g), c' = f * c + i * g, h' = o * tanh(c')
struct LstmCell {
  DenseLayer input_gate;
  DenseLayer forget_gate;
  DenseLayer output_gate;
  DenseLayer candidate;
  Tensor hidden;
  Tensor cell;

  // Dense initialisation for every gate, forget-gate biases set to 1.
  static LstmCell random(std::size_t in, std::size_t hidden_width, Rng& rng);
  LstmCell(DenseLayer input, DenseLayer forget, DenseLayer output, DenseLayer cand);

  std::size_t hidden_width() const { return input_gate.out_width(); }
  std::size_t in_width() const { return input_gate.in_width() - hidden_width(); }
  std::size_t parameter_count() const;
  void reset();
};

Tensor lstm_step(LstmCell& cell, const Tensor& x_t);

struct LstmNodes {
  NodeId hidden;
  NodeId cell;
};

// Parameter nodes in the order W_i, b_i, W_f, b_f, W_o, b_o, W_g, b_g.
LstmNodes lstm(Tape& tape, NodeId x, LstmNodes prev, std::span<const NodeId, 8> params);

}  // namespace wpunn
