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

#include "wpunn/topologies.hpp"

namespace wpunn {
namespace {

LayerDesc dense(std::size_t width) { return {LayerKind::Dense, width}; }

LayerDesc gate_window(std::optional<std::size_t> recur = std::nullopt) {
  LayerDesc d{LayerKind::Window};
  d.window = {2, 2, Aggregator::Product};
  d.recurrent_target = recur;
  return d;
}

}  // namespace

NetworkSpec mnist_spec(const WindowConfig& window) {
  LayerDesc win{LayerKind::Window};
  win.window = window;
  return {784, {dense(300), win, dense(100), win, dense(10), {LayerKind::LogSoftmax}}};
}

NetworkSpec poly_wpunn_spec() {
  return {2, {dense(50), gate_window(), dense(50), gate_window(), dense(50), gate_window(),
              dense(1)}};
}

NetworkSpec poly_relu_spec() {
  const LayerDesc relu{LayerKind::LeakyRelu, 0, {}, 0.1};
  return {2, {dense(50), relu, dense(50), relu, dense(50), relu, dense(1)}};
}

NetworkSpec co2_wpunn_spec() {
  const LayerDesc sig{LayerKind::Sigmoid};
  return {1, {dense(100), sig, gate_window(1), dense(100), sig, gate_window(4), dense(1)}};
}

NetworkSpec co2_lstm_spec() {
  return {1, {{LayerKind::Lstm, 100}, {LayerKind::Lstm, 100}, dense(1)}};
}

}  // namespace wpunn
