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

#include <benchmark/benchmark.h>

#include "wpunn/autodiff.hpp"
#include "wpunn/layers.hpp"
#include "wpunn/network.hpp"
#include "wpunn/rng.hpp"
#include "wpunn/tensor.hpp"
#include "wpunn/topologies.hpp"

namespace {

using namespace wpunn;

constexpr std::size_t kBatch = 32;
constexpr std::size_t kPixels = 784;

WindowConfig window_arg(const benchmark::State& state) {
  return {static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)),
          Aggregator::Product};
}

void BM_WindowForward(benchmark::State& state) {
  Rng rng(1);
  const Tensor x = uniform(rng, Shape{kBatch, kPixels}, 0.0, 1.0);
  const WindowConfig cfg = window_arg(state);
  for (auto _ : state) benchmark::DoNotOptimize(windowed_forward(x, cfg));
  state.SetItemsProcessed(state.iterations() * kBatch * kPixels);
}
BENCHMARK(BM_WindowForward)->Args({2, 1})->Args({4, 2})->Args({4, 4})->Args({8, 1});

void BM_WindowBackward(benchmark::State& state) {
  Rng rng(2);
  const Tensor x = uniform(rng, Shape{kBatch, kPixels}, 0.0, 1.0);
  const WindowConfig cfg = window_arg(state);
  const Tensor up = uniform(rng, windowed_forward(x, cfg).shape(), -1.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(windowed_backward(x, cfg, up));
  state.SetItemsProcessed(state.iterations() * kBatch * kPixels);
}
BENCHMARK(BM_WindowBackward)->Args({2, 1})->Args({4, 2})->Args({4, 4})->Args({8, 1});

void BM_DenseForward(benchmark::State& state) {
  Rng rng(3);
  const auto in = static_cast<std::size_t>(state.range(0));
  const DenseLayer layer = DenseLayer::random(in, 100, rng);
  const Tensor x = uniform(rng, Shape{kBatch, in}, -1.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(dense_forward(layer, x));
}
BENCHMARK(BM_DenseForward)->Arg(100)->Arg(391)->Arg(784);

void BM_MnistTapeStep(benchmark::State& state) {
  Rng rng(4);
  const Network net(mnist_spec(window_arg(state)), rng);
  const Tensor x = uniform(rng, Shape{kBatch, kPixels}, 0.0, 1.0);
  for (auto _ : state) {
    Tape tape;
    const auto params = net.bind(tape);
    const NodeId out = net.forward(tape, params, tape.leaf(x));
    tape.backward(sum(tape, out));
    benchmark::DoNotOptimize(tape.adjoint(params.front()));
  }
  state.SetItemsProcessed(state.iterations() * kBatch);
}
BENCHMARK(BM_MnistTapeStep)->Args({4, 1})->Args({4, 2})->Args({4, 4});

}  // namespace

BENCHMARK_MAIN();
