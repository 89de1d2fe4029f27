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

#include "wpunn/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <string>

#include "wpunn/data.hpp"
#include "wpunn/error.hpp"
#include "wpunn/rng.hpp"

namespace wpunn {

AdamState::AdamState(std::span<const Tensor> params, double lr) : learning_rate(lr) {
  for (const auto& p : params) {
    first_moment.push_back(Tensor::zeros_like(p));
    second_moment.push_back(Tensor::zeros_like(p));
  }
}

void adam_step(AdamState& state, std::span<Tensor> params, std::span<const Tensor> grads,
               std::span<const std::string> names) {
  if (params.size() != grads.size() || params.size() != state.first_moment.size()) {
    throw DimensionError("adam: " + std::to_string(params.size()) + " parameters, " +
                         std::to_string(grads.size()) + " gradients, " +
                         std::to_string(state.first_moment.size()) + " moment slots");
  }
  for (std::size_t k = 0; k < params.size(); ++k) {
    const std::string name = k < names.size() ? names[k] : "parameter " + std::to_string(k);
    if (grads[k].shape() != params[k].shape()) {
      throw DimensionError("adam: gradient for " + name + " has shape " +
                           shape_string(grads[k].shape()) + ", parameter is " +
                           shape_string(params[k].shape()));
    }
    if (!all_finite(grads[k])) throw NumericError("adam: non-finite gradient for " + name);
  }

  ++state.step;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(state.beta1, t);
  const double correction2 = 1.0 - std::pow(state.beta2, t);
  for (std::size_t k = 0; k < params.size(); ++k) {
    auto p = params[k].mutable_data();
    auto m = state.first_moment[k].mutable_data();
    auto v = state.second_moment[k].mutable_data();
    const auto g = grads[k].data();
    for (std::size_t i = 0; i < p.size(); ++i) {
      m[i] = state.beta1 * m[i] + (1.0 - state.beta1) * g[i];
      v[i] = state.beta2 * v[i] + (1.0 - state.beta2) * g[i] * g[i];
      const double m_hat = m[i] / correction1;
      const double v_hat = v[i] / correction2;
      p[i] -= state.learning_rate * m_hat / (std::sqrt(v_hat) + state.epsilon);
    }
  }
}

double nll_loss(const Tensor& log_probs, std::size_t label) {
  if (label >= log_probs.size()) {
    throw ArgumentError("nll_loss: label " + std::to_string(label) + " out of range for " +
                        std::to_string(log_probs.size()) + " classes");
  }
  return -log_probs[label];
}

double mse_loss(const Tensor& pred, const Tensor& target) {
  if (pred.shape() != target.shape()) {
    throw DimensionError("mse_loss: shape mismatch " + shape_string(pred.shape()) + " vs " +
                         shape_string(target.shape()));
  }
  if (pred.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - target[i];
    total += d * d;
  }
  return total / static_cast<double>(pred.size());
}

NodeId nll_loss(Tape& tape, NodeId log_probs, std::span<const std::size_t> labels) {
  const Tensor& lp = tape.value(log_probs);
  if (labels.size() != lp.rows()) {
    throw DimensionError("nll_loss: " + std::to_string(labels.size()) + " labels for " +
                         shape_string(lp.shape()));
  }
  double total = 0.0;
  for (std::size_t r = 0; r < lp.rows(); ++r) {
    if (labels[r] >= lp.cols()) {
      throw ArgumentError("nll_loss: label " + std::to_string(labels[r]) + " out of range for " +
                          std::to_string(lp.cols()) + " classes");
    }
    total -= lp.row(r)[labels[r]];
  }
  const double inv = 1.0 / static_cast<double>(lp.rows());
  std::vector<std::size_t> owned(labels.begin(), labels.end());
  return tape.record(OpKind::NllLoss, {log_probs}, Tensor::vector({total * inv}),
                     [log_probs, owned = std::move(owned), inv](Tape& t, NodeId self) {
                       const double g = t.adjoint(self)[0] * inv;
                       Tensor& acc = t.adjoint_accumulator(log_probs);
                       for (std::size_t r = 0; r < owned.size(); ++r) {
                         acc.mutable_row(r)[owned[r]] -= g;
                       }
                     });
}

NodeId mse_loss(Tape& tape, NodeId pred, const Tensor& target) {
  const double value = mse_loss(tape.value(pred), target);
  const double inv = 1.0 / static_cast<double>(std::max<std::size_t>(target.size(), 1));
  return tape.record(OpKind::MseLoss, {pred}, Tensor::vector({value}),
                     [pred, target, inv](Tape& t, NodeId self) {
                       const double g = t.adjoint(self)[0] * 2.0 * inv;
                       const Tensor& p = t.value(pred);
                       auto acc = t.adjoint_accumulator(pred).mutable_data();
                       for (std::size_t i = 0; i < acc.size(); ++i) {
                         acc[i] += g * (p[i] - target[i]);
                       }
                     });
}

std::vector<std::size_t> epoch_permutation(std::size_t n, std::uint64_t seed, std::size_t epoch) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(derive_seed(seed, static_cast<std::uint64_t>(epoch)));
  shuffle(std::span<std::size_t>(order), rng);
  return order;
}

namespace {

using Clock = std::chrono::steady_clock;

void validate(const TrainConfig& config, std::size_t n) {
  if (config.epochs < 1) throw ArgumentError("train: epoch count must be at least 1");
  if (config.batch_size < 1) throw ArgumentError("train: batch size must be at least 1");
  if (n == 0) throw ArgumentError("train: dataset is empty");
}

std::vector<Tensor> collect_grads(const Tape& tape, std::span<const NodeId> params) {
  std::vector<Tensor> grads;
  grads.reserve(params.size());
  for (const NodeId id : params) grads.push_back(tape.adjoint(id));
  return grads;
}

// batch_loss(tape, params, indices) records the mean loss of the given rows.
template <typename BatchLoss>
TrainResult run_minibatches(Network& net, std::size_t n, const TrainConfig& config,
                            const EvalFn& eval, double initial_loss, BatchLoss batch_loss) {
  const auto start = Clock::now();
  auto seconds = [&] { return std::chrono::duration<double>(Clock::now() - start).count(); };
  TrainResult result;
  result.epochs.push_back({0, initial_loss, eval ? eval(net) : 0.0, seconds()});

  AdamState adam(net.parameters(), config.learning_rate);
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    const auto order = epoch_permutation(n, config.seed, epoch);
    double weighted = 0.0;
    std::size_t batch_no = 0;
    for (std::size_t begin = 0; begin < n; begin += config.batch_size, ++batch_no) {
      const std::size_t end = std::min(n, begin + config.batch_size);
      const std::span<const std::size_t> rows(order.data() + begin, end - begin);
      Tape tape;
      const auto params = net.bind(tape);
      NodeId loss;
      try {
        loss = batch_loss(tape, params, rows);
      } catch (const NumericError& e) {
        throw NumericError("training diverged at epoch " + std::to_string(epoch) + ", batch " +
                           std::to_string(batch_no) + ": " + e.what());
      }
      const double value = tape.value(loss)[0];
      if (!std::isfinite(value)) {
        throw NumericError("training diverged at epoch " + std::to_string(epoch) + ", batch " +
                           std::to_string(batch_no) + ": loss is not finite");
      }
      weighted += value * static_cast<double>(rows.size());
      tape.backward(loss);
      adam_step(adam, net.parameters(), collect_grads(tape, params), net.parameter_names());
    }
    result.epochs.push_back(
        {epoch, weighted / static_cast<double>(n), eval ? eval(net) : 0.0, seconds()});
  }
  return result;
}

double mean_nll(const Network& net, const ClassificationDataset& data) {
  double total = 0.0;
  constexpr std::size_t chunk = 1000;
  std::vector<std::size_t> rows;
  for (std::size_t begin = 0; begin < data.size(); begin += chunk) {
    const std::size_t end = std::min(data.size(), begin + chunk);
    rows.resize(end - begin);
    std::iota(rows.begin(), rows.end(), begin);
    const Tensor out = net.predict(take_rows(data.features, rows));
    for (std::size_t r = 0; r < rows.size(); ++r) total -= out.row(r)[data.labels[begin + r]];
  }
  return total / static_cast<double>(data.size());
}

Tensor gather(const Tensor& targets, std::span<const std::size_t> rows) {
  Tensor out({rows.size(), 1});
  for (std::size_t i = 0; i < rows.size(); ++i) out[i] = targets[rows[i]];
  return out;
}

}  // namespace

TrainResult train_feedforward(Network& net, const ClassificationDataset& data,
                              const TrainConfig& config, const EvalFn& eval) {
  validate(config, data.size());
  if (config.loss != LossKind::NegativeLogLikelihood) {
    throw ConfigError("train: classification data requires the negative log-likelihood loss");
  }
  return run_minibatches(
      net, data.size(), config, eval, mean_nll(net, data),
      [&](Tape& tape, std::span<const NodeId> params, std::span<const std::size_t> rows) {
        const NodeId x = tape.leaf(take_rows(data.features, rows));
        std::vector<std::size_t> labels(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) labels[i] = data.labels[rows[i]];
        return nll_loss(tape, net.forward(tape, params, x), labels);
      });
}

TrainResult train_feedforward(Network& net, const RegressionDataset& data,
                              const TrainConfig& config, const EvalFn& eval) {
  validate(config, data.size());
  if (config.loss != LossKind::MeanSquaredError) {
    throw ConfigError("train: regression data requires the mean squared error loss");
  }
  return run_minibatches(
      net, data.size(), config, eval, mean_squared_error(net, data),
      [&](Tape& tape, std::span<const NodeId> params, std::span<const std::size_t> rows) {
        const NodeId x = tape.leaf(take_rows(data.features, rows));
        return mse_loss(tape, net.forward(tape, params, x), gather(data.targets, rows));
      });
}

namespace {

double one_step_mse(const Network& net, std::span<const double> series) {
  RecurrentState state = net.initial_state();
  double total = 0.0;
  for (std::size_t t = 0; t + 1 < series.size(); ++t) {
    const double d = net.step(Tensor::vector({series[t]}), state)[0] - series[t + 1];
    total += d * d;
  }
  return total / static_cast<double>(series.size() - 1);
}

}  // namespace

TrainResult train_recurrent(Network& net, std::span<const double> series,
                            const TrainConfig& config, const EvalFn& eval) {
  validate(config, series.size());
  if (config.bptt_length < 1) throw ArgumentError("train: BPTT length must be at least 1");
  if (series.size() < config.bptt_length + 1) {
    throw ArgumentError("train: series of length " + std::to_string(series.size()) +
                        " is shorter than BPTT length + 1 = " +
                        std::to_string(config.bptt_length + 1));
  }
  if (net.input_width() != 1 || net.output_width() != 1) {
    throw DimensionError("train: recurrent forecasting needs a 1 -> 1 network");
  }
  const auto start = Clock::now();
  auto seconds = [&] { return std::chrono::duration<double>(Clock::now() - start).count(); };
  TrainResult result;
  result.epochs.push_back({0, one_step_mse(net, series), eval ? eval(net) : 0.0, seconds()});

  AdamState adam(net.parameters(), config.learning_rate);
  const std::size_t steps = series.size() - 1;
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    RecurrentState state = net.initial_state();
    double total = 0.0;
    std::size_t window_no = 0;
    for (std::size_t t0 = 0; t0 < steps; t0 += config.bptt_length, ++window_no) {
      const std::size_t len = std::min(config.bptt_length, steps - t0);
      Tape tape;
      const auto params = net.bind(tape);
      TapeState nodes = net.attach(tape, state);
      std::vector<NodeId> errors;
      errors.reserve(len);
      try {
        for (std::size_t k = 0; k < len; ++k) {
          const NodeId out =
              net.forward(tape, params, tape.leaf(Tensor::vector({series[t0 + k]})), &nodes);
          errors.push_back(mse_loss(tape, out, Tensor::vector({series[t0 + k + 1]})));
        }
      } catch (const NumericError& e) {
        throw NumericError("training diverged at epoch " + std::to_string(epoch) + ", window " +
                           std::to_string(window_no) + ": " + e.what());
      }
      const NodeId loss = scale(tape, add_n(tape, errors), 1.0 / static_cast<double>(len));
      const double value = tape.value(loss)[0];
      if (!std::isfinite(value)) {
        throw NumericError("training diverged at epoch " + std::to_string(epoch) + ", window " +
                           std::to_string(window_no) + ": loss is not finite");
      }
      total += value * static_cast<double>(len);
      tape.backward(loss);
      adam_step(adam, net.parameters(), collect_grads(tape, params), net.parameter_names());
      state = net.detach(tape, nodes);
    }
    result.epochs.push_back(
        {epoch, total / static_cast<double>(steps), eval ? eval(net) : 0.0, seconds()});
  }
  return result;
}

Tensor forecast(const Network& net, std::span<const double> warmup, std::size_t horizon) {
  if (warmup.empty()) throw ArgumentError("forecast: warmup is empty");
  if (horizon < 1) throw ArgumentError("forecast: horizon must be at least 1");
  RecurrentState state = net.initial_state();
  double next = 0.0;
  for (const double v : warmup) next = net.step(Tensor::vector({v}), state)[0];
  Tensor out({horizon});
  for (std::size_t h = 0; h < horizon; ++h) {
    out[h] = next;
    if (h + 1 < horizon) next = net.step(Tensor::vector({next}), state)[0];
  }
  return out;
}

double misclassification_percent(const Network& net, const ClassificationDataset& data,
                                 std::size_t chunk) {
  if (data.size() == 0) throw ArgumentError("misclassification: empty dataset");
  std::size_t wrong = 0;
  std::vector<std::size_t> rows;
  for (std::size_t begin = 0; begin < data.size(); begin += chunk) {
    const std::size_t end = std::min(data.size(), begin + chunk);
    rows.resize(end - begin);
    std::iota(rows.begin(), rows.end(), begin);
    const Tensor out = net.predict(take_rows(data.features, rows));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const auto row = out.row(r);
      const auto best = static_cast<std::size_t>(std::ranges::max_element(row) - row.begin());
      if (best != data.labels[begin + r]) ++wrong;
    }
  }
  return 100.0 * static_cast<double>(wrong) / static_cast<double>(data.size());
}

double mean_squared_error(const Network& net, const RegressionDataset& data) {
  const Tensor out = net.predict(data.features);
  return mse_loss(out.reshaped({out.size()}), data.targets);
}

}  // namespace wpunn
