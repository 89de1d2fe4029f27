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
#include "wpunn/network.hpp"
#include "wpunn/tensor.hpp"

namespace wpunn {

struct ClassificationDataset;
struct RegressionDataset;

// Adam with bias correction.
struct AdamState {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t step = 0;
  std::vector<Tensor> first_moment;
  std::vector<Tensor> second_moment;

  AdamState() = default;
  AdamState(std::span<const Tensor> params, double lr);
};

// m <- b1 m + (1-b1) g;  v <- b2 v + (1-b2) g^2;
// p <- p - lr * m_hat / (sqrt(v_hat) + eps).
// Throws NumericError naming the parameter if a gradient is not finite.
void adam_step(AdamState& state, std::span<Tensor> params, std::span<const Tensor> grads,
               std::span<const std::string> names = {});

// -log_probs[label] for one sample.
double nll_loss(const Tensor& log_probs, std::size_t label);
// Mean squared difference over all elements.
double mse_loss(const Tensor& pred, const Tensor& target);

// Tape losses, averaged over the batch (rows) / all elements.
NodeId nll_loss(Tape& tape, NodeId log_probs, std::span<const std::size_t> labels);
NodeId mse_loss(Tape& tape, NodeId pred, const Tensor& target);

enum class LossKind { NegativeLogLikelihood, MeanSquaredError };

struct TrainConfig {
  double learning_rate = 1e-3;
  std::size_t batch_size = 32;
  std::size_t epochs = 1;
  std::size_t bptt_length = 36;
  std::uint64_t seed = 0;
  LossKind loss = LossKind::MeanSquaredError;
};

struct EpochMetrics {
  std::size_t epoch = 0;  // 0 = before the first update
  double train_loss = 0.0;
  double test_metric = 0.0;
  double wall_seconds = 0.0;
};

using EvalFn = std::function<double(const Network&)>;

struct TrainResult {
  std::vector<EpochMetrics> epochs;
};

// Sample order for one epoch; a function of (n, seed, epoch) only.
std::vector<std::size_t> epoch_permutation(std::size_t n, std::uint64_t seed, std::size_t epoch);

// Shuffled mini-batch training. The loss in config must match the dataset
// kind. eval, when set, fills EpochMetrics::test_metric after every epoch.
// A non-finite loss aborts with NumericError naming the epoch and batch.
TrainResult train_feedforward(Network& net, const ClassificationDataset& data,
                              const TrainConfig& config, const EvalFn& eval = {});
TrainResult train_feedforward(Network& net, const RegressionDataset& data,
                              const TrainConfig& config, const EvalFn& eval = {});

// One-step-ahead training on a (normalised) series: input value t, target
// value t+1. Truncated BPTT over consecutive windows of bptt_length steps;
// state carries across windows and resets every epoch.
TrainResult train_recurrent(Network& net, std::span<const double> series,
                            const TrainConfig& config, const EvalFn& eval = {});

// Runs warmup through the network, then feeds its own predictions back for
// horizon steps. The first forecast is the prediction after the last warmup
// value.
Tensor forecast(const Network& net, std::span<const double> warmup, std::size_t horizon);

// Percentage of rows whose argmax differs from the label, evaluated in chunks.
double misclassification_percent(const Network& net, const ClassificationDataset& data,
                                 std::size_t chunk = 1000);
double mean_squared_error(const Network& net, const RegressionDataset& data);

}  // namespace wpunn
