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

#include "wpunn/recurrent.hpp"

#include <initializer_list>
#include <string>

#include "wpunn/error.hpp"
#include "wpunn/rng.hpp"

namespace wpunn {

GatedBlock::GatedBlock(DenseLayer layer) : dense(std::move(layer)) {
  const std::size_t width = dense.out_width();
  if (width == 0 || width % 2 != 0 || dense.in_width() <= width / 2) {
    throw DimensionError("gated block: dense layer " + shape_string(dense.weights.shape()) +
                         " must map (in + N) -> 2N");
  }
  state = Tensor({width / 2});
}

GatedBlock GatedBlock::random(std::size_t in, std::size_t out, Rng& rng) {
  return GatedBlock(DenseLayer::random(in + out, 2 * out, rng));
}

void GatedBlock::reset() { state = Tensor({out_width()}); }

NodeId gated_block(Tape& tape, NodeId x, NodeId prev, NodeId weights, NodeId biases) {
  const NodeId joined = concat_cols(tape, x, prev);
  const NodeId pre = affine(tape, joined, weights, biases);
  return window(tape, sigmoid(tape, pre), kGateWindow);
}

Tensor gated_block_step(GatedBlock& block, const Tensor& x_t) {
  if (x_t.rank() != 1 || x_t.size() != block.in_width()) {
    throw DimensionError("gated block: expected input [" + std::to_string(block.in_width()) +
                         "], got " + shape_string(x_t.shape()));
  }
  Tape tape;
  const NodeId y = gated_block(tape, tape.leaf(x_t), tape.leaf(block.state),
                               tape.leaf(block.dense.weights), tape.leaf(block.dense.biases));
  block.state = tape.value(y);
  return block.state;
}

LstmCell::LstmCell(DenseLayer input, DenseLayer forget, DenseLayer output, DenseLayer cand)
    : input_gate(std::move(input)),
      forget_gate(std::move(forget)),
      output_gate(std::move(output)),
      candidate(std::move(cand)) {
  const auto& shape = input_gate.weights.shape();
  for (const DenseLayer* g : {&forget_gate, &output_gate, &candidate}) {
    if (g->weights.shape() != shape || g->biases.size() != shape[0]) {
      throw DimensionError("lstm: gate parameter shapes differ");
    }
  }
  if (shape[1] <= shape[0]) {
    throw DimensionError("lstm: gate weights " + shape_string(shape) +
                         " must map (in + hidden) -> hidden");
  }
  reset();
}

LstmCell LstmCell::random(std::size_t in, std::size_t hidden_width, Rng& rng) {
  const std::size_t joined = in + hidden_width;
  LstmCell cell(DenseLayer::random(joined, hidden_width, rng),
                DenseLayer::random(joined, hidden_width, rng),
                DenseLayer::random(joined, hidden_width, rng),
                DenseLayer::random(joined, hidden_width, rng));
  cell.forget_gate.biases = Tensor({hidden_width}, 1.0);
  return cell;
}

std::size_t LstmCell::parameter_count() const {
  return input_gate.parameter_count() + forget_gate.parameter_count() +
         output_gate.parameter_count() + candidate.parameter_count();
}

void LstmCell::reset() {
  hidden = Tensor({hidden_width()});
  cell = Tensor({hidden_width()});
}

LstmNodes lstm(Tape& tape, NodeId x, LstmNodes prev, std::span<const NodeId, 8> params) {
  const NodeId joined = concat_cols(tape, x, prev.hidden);
  const NodeId i = sigmoid(tape, affine(tape, joined, params[0], params[1]));
  const NodeId f = sigmoid(tape, affine(tape, joined, params[2], params[3]));
  const NodeId o = sigmoid(tape, affine(tape, joined, params[4], params[5]));
  const NodeId g = tanh(tape, affine(tape, joined, params[6], params[7]));
  const NodeId c = add(tape, multiply(tape, f, prev.cell), multiply(tape, i, g));
  const NodeId h = multiply(tape, o, tanh(tape, c));
  return {h, c};
}

Tensor lstm_step(LstmCell& cell, const Tensor& x_t) {
  if (x_t.rank() != 1 || x_t.size() != cell.in_width()) {
    throw DimensionError("lstm: expected input [" + std::to_string(cell.in_width()) + "], got " +
                         shape_string(x_t.shape()));
  }
  Tape tape;
  const std::array<NodeId, 8> params{
      tape.leaf(cell.input_gate.weights),  tape.leaf(cell.input_gate.biases),
      tape.leaf(cell.forget_gate.weights), tape.leaf(cell.forget_gate.biases),
      tape.leaf(cell.output_gate.weights), tape.leaf(cell.output_gate.biases),
      tape.leaf(cell.candidate.weights),   tape.leaf(cell.candidate.biases)};
  const NodeId x = tape.leaf(x_t);
  const LstmNodes prev{tape.leaf(cell.hidden), tape.leaf(cell.cell)};
  const LstmNodes next = lstm(tape, x, prev, params);
  cell.hidden = tape.value(next.hidden);
  cell.cell = tape.value(next.cell);
  return cell.hidden;
}

}  // namespace wpunn
