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

#include "wpunn/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <ostream>
#include <sstream>

#include "wpunn/data.hpp"
#include "wpunn/gradcheck_suite.hpp"
#include "wpunn/rng.hpp"
#include "wpunn/topologies.hpp"
#include "wpunn/training.hpp"

namespace wpunn {

const std::vector<std::string>& experiment_ids() {
  static const std::vector<std::string> ids{"mnist-stride", "mnist-window", "poly",
                                            "co2",          "gradcheck",    "exact-poly"};
  return ids;
}

namespace {

std::size_t parse_size(std::string_view key, std::string_view value) {
  std::size_t out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size() || value.empty()) {
    throw ConfigError("setting '" + std::string(key) + "' expects a non-negative integer, got '" +
                      std::string(value) + "'");
  }
  return out;
}

double parse_double(std::string_view key, std::string_view value) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size() || value.empty()) {
    throw ConfigError("setting '" + std::string(key) + "' expects a number, got '" +
                      std::string(value) + "'");
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  if (key == "experiment") {
    config.experiment_id = std::string(value);
  } else if (key == "w") {
    config.window = parse_size(key, value);
  } else if (key == "s") {
    config.stride = parse_size(key, value);
  } else if (key == "d") {
    config.degree = parse_size(key, value);
  } else if (key == "lr") {
    config.learning_rate = parse_double(key, value);
  } else if (key == "epochs") {
    config.epochs = parse_size(key, value);
  } else if (key == "seed") {
    config.seed = parse_size(key, value);
  } else if (key == "subset") {
    config.subset = parse_size(key, value);
  } else if (key == "batch") {
    config.batch_size = parse_size(key, value);
  } else if (key == "repeats") {
    config.repeats = parse_size(key, value);
  } else if (key == "out") {
    config.out_dir = std::string(value);
  } else if (key == "data") {
    config.data_dir = std::string(value);
  } else if (key == "timing") {
    config.timing = value == "true" || value == "1" || value == "yes";
  } else if (key == "corrupt") {
    config.corrupt = std::string(value);
  } else {
    throw ConfigError("unknown setting '" + std::string(key) + "'");
  }
}

ExperimentConfig parse_config_text(std::string_view text, ExperimentConfig base) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const std::string_view body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key=value");
    }
    apply_setting(base, body.substr(0, eq), body.substr(eq + 1));
  }
  return base;
}

void validate(const ExperimentConfig& config) {
  const auto& ids = experiment_ids();
  if (std::ranges::find(ids, config.experiment_id) == ids.end()) {
    throw ConfigError("unknown experiment '" + config.experiment_id + "'");
  }
  if (config.window && *config.window < 1) throw ConfigError("w must be at least 1");
  if (config.stride && *config.stride < 1) throw ConfigError("s must be at least 1");
  const std::size_t w = config.window.value_or(config.experiment_id == "mnist-stride" ? 4 : 8);
  if (config.stride && *config.stride > w) {
    throw ConfigError("stride s=" + std::to_string(*config.stride) + " exceeds window w=" +
                      std::to_string(w) + " (require 1 <= s <= w)");
  }
  if (config.degree && (*config.degree < 1 || *config.degree > 10)) {
    throw ConfigError("degree d=" + std::to_string(*config.degree) + " outside 1..10");
  }
  if (config.learning_rate && !(*config.learning_rate > 0.0)) {
    throw ConfigError("learning rate must be positive");
  }
  if (config.epochs && *config.epochs < 1) throw ConfigError("epochs must be at least 1");
  if (config.batch_size && *config.batch_size < 1) throw ConfigError("batch must be at least 1");
  if (config.repeats && *config.repeats < 1) throw ConfigError("repeats must be at least 1");
  if (config.subset && *config.subset < 1) throw ConfigError("subset must be at least 1");
}

std::filesystem::path default_data_dir() {
  if (const char* env = std::getenv("WPUNN_DATA"); env != nullptr && *env != '\0') return env;
  return "data";
}

std::filesystem::path resolve_data_dir(const ExperimentConfig& config) {
  return config.data_dir.empty() ? default_data_dir() : config.data_dir;
}

double detrended_correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 3) {
    throw ArgumentError("detrended_correlation: need two equally long series of length >= 3");
  }
  auto detrend = [](std::span<const double> v) {
    const double n = static_cast<double>(v.size());
    const double xbar = (n - 1.0) / 2.0;
    const double ybar = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double dx = static_cast<double>(i) - xbar;
      sxy += dx * (v[i] - ybar);
      sxx += dx * dx;
    }
    const double slope = sxy / sxx;
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      r[i] = v[i] - (ybar + slope * (static_cast<double>(i) - xbar));
    }
    return r;
  };
  const auto ra = detrend(a);
  const auto rb = detrend(b);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    sab += ra[i] * rb[i];
    saa += ra[i] * ra[i];
    sbb += rb[i] * rb[i];
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

double exact_poly_deviation(double network_value, double direct_value, double term_magnitude) {
  const double scale = std::max({std::abs(direct_value), term_magnitude, 1e-300});
  return std::abs(network_value - direct_value) / scale;
}

namespace {

struct MnistData {
  ClassificationDataset train;
  ClassificationDataset test;
};

MnistData load_mnist_dir(const ExperimentConfig& config) {
  const auto dir = resolve_data_dir(config) / "mnist";
  const std::vector<std::filesystem::path> files{
      dir / "train-images-idx3-ubyte", dir / "train-labels-idx1-ubyte",
      dir / "t10k-images-idx3-ubyte", dir / "t10k-labels-idx1-ubyte"};
  std::string missing;
  for (const auto& f : files) {
    if (!std::filesystem::exists(f)) missing += "\n  " + f.string();
  }
  if (!missing.empty()) {
    throw DataMissingError("MNIST files not found; expected:" + missing +
                           "\n(run scripts/fetch_data.sh or pass --data DIR)");
  }
  MnistData data{load_mnist(files[0], files[1]), load_mnist(files[2], files[3])};
  if (config.subset) data.train = head(data.train, *config.subset);
  return data;
}

std::vector<std::pair<std::string, std::string>> echo(const ExperimentConfig& config) {
  std::vector<std::pair<std::string, std::string>> out{{"experiment", config.experiment_id},
                                                       {"seed", std::to_string(config.seed)}};
  auto opt = [&](const char* key, const std::optional<std::size_t>& v) {
    if (v) out.emplace_back(key, std::to_string(*v));
  };
  opt("w", config.window);
  opt("s", config.stride);
  opt("d", config.degree);
  opt("epochs", config.epochs);
  opt("subset", config.subset);
  opt("batch", config.batch_size);
  opt("repeats", config.repeats);
  if (config.learning_rate) out.emplace_back("lr", format_number(*config.learning_rate));
  return out;
}

std::string run_label(const ExperimentConfig& config, std::string prefix) {
  if (!prefix.empty()) prefix += "-";
  std::string label = prefix + "seed" + std::to_string(config.seed);
  if (config.subset) label += "-n" + std::to_string(*config.subset);
  if (config.epochs) label += "-e" + std::to_string(*config.epochs);
  return label;
}

void append_rows(ExperimentReport& report, const std::string& label, const TrainResult& result,
                 bool timing) {
  for (const auto& e : result.epochs) {
    report.rows.push_back({label, e.epoch, e.train_loss, e.test_metric,
                           timing ? std::optional<double>(e.wall_seconds) : std::nullopt});
  }
}

double final_metric(const TrainResult& result) { return result.epochs.back().test_metric; }

struct SweepStats {
  double mean = 0.0;
  double variance = 0.0;  // sample variance
  double spread = 0.0;    // max - min
};

SweepStats stats(const std::vector<double>& values) {
  SweepStats s;
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  for (const double v : values) s.variance += (v - s.mean) * (v - s.mean);
  if (values.size() > 1) s.variance /= static_cast<double>(values.size() - 1);
  const auto [lo, hi] = std::ranges::minmax_element(values);
  s.spread = *hi - *lo;
  return s;
}

TrainResult train_mnist(const MnistData& data, const WindowConfig& window,
                        const ExperimentConfig& config, const std::string& label) {
  const std::uint64_t seed = derive_seed(config.seed, "mnist-" + label);
  Rng init(seed);
  Network net(mnist_spec(window), init);
  TrainConfig train;
  train.learning_rate = config.learning_rate.value_or(1e-4);
  train.batch_size = config.batch_size.value_or(32);
  train.epochs = config.epochs.value_or(20);
  train.seed = seed;
  train.loss = LossKind::NegativeLogLikelihood;
  const auto& test = data.test;
  return train_feedforward(net, data.train, train,
                           [&test](const Network& n) { return misclassification_percent(n, test); });
}

std::string two_digits(std::size_t v) { return (v < 10 ? "0" : "") + std::to_string(v); }

}  // namespace

ExperimentReport run_mnist_stride(const ExperimentConfig& config) {
  const std::size_t w = config.window.value_or(4);
  std::vector<std::size_t> strides;
  if (config.stride) {
    strides.push_back(*config.stride);
  } else {
    for (std::size_t s = 1; s <= w; ++s) strides.push_back(s);
  }
  for (const auto s : strides) output_width(100, {w, s, Aggregator::Product});
  const auto data = load_mnist_dir(config);

  const std::string prefix =
      "w" + std::to_string(w) + (config.stride ? "-s" + std::to_string(*config.stride) : "");
  ExperimentReport report{"mnist-stride", run_label(config, prefix), echo(config)};
  report.metric_name = "test misclassification %";
  std::vector<double> finals;
  for (const auto s : strides) {
    const std::string label = "s" + std::to_string(s);
    const auto result = train_mnist(data, {w, s, Aggregator::Product}, config, label);
    append_rows(report, label, result, config.timing);
    finals.push_back(final_metric(result));
    report.add_summary("final-error-" + label, finals.back());
    report.add_summary("wall-seconds-" + label, result.epochs.back().wall_seconds);
  }
  const auto st = stats(finals);
  report.add_summary("mean-final-error", st.mean);
  report.add_summary("variance-final-error", st.variance);
  report.add_summary("spread-final-error", st.spread);
  report.add_summary("parameters", static_cast<double>(count_parameters(
                                       mnist_spec({w, strides.front(), Aggregator::Product}))));
  report.sort_rows();
  return report;
}

ExperimentReport run_mnist_window(const ExperimentConfig& config) {
  const std::size_t s = config.stride.value_or(1);
  std::vector<std::size_t> windows;
  if (config.window) {
    windows.push_back(*config.window);
  } else {
    for (std::size_t w = std::max<std::size_t>(2, s); w <= 8; ++w) windows.push_back(w);
  }
  for (const auto w : windows) output_width(100, {w, s, Aggregator::Product});
  const auto data = load_mnist_dir(config);

  const std::string prefix =
      "s" + std::to_string(s) + (config.window ? "-w" + std::to_string(*config.window) : "");
  ExperimentReport report{"mnist-window", run_label(config, prefix), echo(config)};
  report.metric_name = "test misclassification %";
  for (const auto w : windows) {
    const std::string label = "w" + std::to_string(w);
    const auto result = train_mnist(data, {w, s, Aggregator::Product}, config, label);
    append_rows(report, label, result, config.timing);
    report.add_summary("final-error-" + label, final_metric(result));
    report.add_summary("wall-seconds-" + label, result.epochs.back().wall_seconds);
  }
  report.sort_rows();
  return report;
}

ExperimentReport run_poly(const ExperimentConfig& config) {
  const std::size_t wpunn_params = count_parameters(poly_wpunn_spec());
  const std::size_t relu_params = count_parameters(poly_relu_spec());
  if (wpunn_params != kPolyWpunnParameters || relu_params != kPolyReluParameters) {
    throw ConfigError("poly: parameter counts " + std::to_string(wpunn_params) + "/" +
                      std::to_string(relu_params) + " differ from 2776/5301");
  }
  std::vector<std::size_t> degrees;
  if (config.degree) {
    degrees.push_back(*config.degree);
  } else {
    for (std::size_t d = 1; d <= 10; ++d) degrees.push_back(d);
  }
  const std::size_t repeats = config.repeats.value_or(3);
  TrainConfig train;
  train.learning_rate = config.learning_rate.value_or(1e-3);
  train.epochs = config.epochs.value_or(2000);
  train.batch_size = config.batch_size.value_or(1000);
  train.loss = LossKind::MeanSquaredError;

  ExperimentReport report{"poly", run_label(config, "r" + std::to_string(repeats)), echo(config)};
  report.metric_name = "test MSE";
  report.add_summary("parameters-wpunn", std::to_string(wpunn_params));
  report.add_summary("parameters-relu", std::to_string(relu_params));
  Curve wpunn_curve{"WPUNN"}, relu_curve{"leaky ReLU"};

  for (const auto d : degrees) {
    struct Model {
      const char* name;
      NetworkSpec spec;
      std::vector<EpochMetrics> mean_curve;
      std::vector<double> finals;
    };
    std::vector<Model> models{{"wpunn", poly_wpunn_spec(), {}, {}},
                              {"relu", poly_relu_spec(), {}, {}}};
    for (std::size_t r = 0; r < repeats; ++r) {
      const std::string tag = "d" + two_digits(d) + "-r" + std::to_string(r);
      Rng data_rng(derive_seed(config.seed, "poly-data-" + tag));
      const auto poly = generate_polynomial(static_cast<int>(d), data_rng);
      const auto train_set = sample_polynomial(poly, 1000, data_rng);
      const auto test_set = sample_polynomial(poly, 1000, data_rng);
      for (auto& model : models) {
        Rng init(derive_seed(config.seed, std::string("poly-init-") + model.name + "-" + tag));
        Network net(model.spec, init);
        train.seed = derive_seed(config.seed, std::string("poly-order-") + model.name + "-" + tag);
        const auto result = train_feedforward(
            net, train_set, train,
            [&test_set](const Network& n) { return mean_squared_error(n, test_set); });
        if (model.mean_curve.empty()) model.mean_curve.resize(result.epochs.size());
        for (std::size_t e = 0; e < result.epochs.size(); ++e) {
          auto& m = model.mean_curve[e];
          m.epoch = result.epochs[e].epoch;
          m.train_loss += result.epochs[e].train_loss / static_cast<double>(repeats);
          m.test_metric += result.epochs[e].test_metric / static_cast<double>(repeats);
          m.wall_seconds += result.epochs[e].wall_seconds;
        }
        model.finals.push_back(final_metric(result));
      }
    }
    for (auto& model : models) {
      const std::string label = std::string(model.name) + "-d" + two_digits(d);
      append_rows(report, label, TrainResult{model.mean_curve}, config.timing);
      const double mean =
          std::accumulate(model.finals.begin(), model.finals.end(), 0.0) / static_cast<double>(repeats);
      report.add_summary("final-mse-" + label, mean);
      (model.name == std::string("wpunn") ? wpunn_curve : relu_curve)
          .points.push_back({static_cast<double>(d), mean});
    }
  }
  report.curves = {wpunn_curve, relu_curve};
  report.add_summary("x-label", "polynomial degree d");
  report.add_summary("y-label", "test MSE (mean over repeats)");
  report.add_summary("log-y", "true");
  report.sort_rows();
  return report;
}

ExperimentReport run_co2(const ExperimentConfig& config) {
  const auto path = resolve_data_dir(config) / "co2" / "co2_monthly.csv";
  if (!std::filesystem::exists(path)) {
    throw DataMissingError("CO2 series not found; expected:\n  " + path.string() +
                           "\n(run scripts/fetch_data.sh or pass --data DIR)");
  }
  const auto series = load_co2(path);
  const auto diffs = training_differences(series);
  const std::size_t horizon = series.test_length();
  if (horizon < 3) throw ConfigError("co2: holdout needs at least 3 months");

  TrainConfig train;
  train.learning_rate = config.learning_rate.value_or(1e-2);
  train.epochs = config.epochs.value_or(1500);
  train.bptt_length = 36;
  train.batch_size = 1;
  train.loss = LossKind::MeanSquaredError;

  const std::vector<double> holdout(
      series.values.data().begin() + static_cast<std::ptrdiff_t>(series.train_length),
      series.values.data().end());
  auto raw_forecast = [&](const Network& net) {
    const Tensor steps = forecast(net, diffs.normalized, horizon);
    return diffs.integrate(steps.data());
  };
  auto raw_mse = [&](const std::vector<double>& f) {
    double total = 0.0;
    for (std::size_t i = 0; i < horizon; ++i) total += (f[i] - holdout[i]) * (f[i] - holdout[i]);
    return total / static_cast<double>(horizon);
  };

  ExperimentReport report{"co2", run_label(config, ""), echo(config)};
  report.metric_name = "holdout forecast MSE (ppm^2)";
  Curve train_points{"train", {}, true}, test_points{"test (withheld)", {}, true};
  for (std::size_t i = 0; i < series.size(); ++i) {
    (i < series.train_length ? train_points : test_points)
        .points.push_back({static_cast<double>(i), series.values[i]});
  }
  report.curves = {train_points, test_points};
  report.add_summary("series-length", std::to_string(series.size()));
  report.add_summary("train-length", std::to_string(series.train_length));
  report.add_summary("model-input", "z-scored monthly differences");

  std::vector<double> mses;
  for (const auto& [name, spec] : std::vector<std::pair<std::string, NetworkSpec>>{
           {"wpunn", co2_wpunn_spec()}, {"lstm", co2_lstm_spec()}}) {
    Rng init(derive_seed(config.seed, "co2-init-" + name));
    Network net(spec, init);
    train.seed = derive_seed(config.seed, "co2-order-" + name);
    const auto result = train_recurrent(net, diffs.normalized, train, [&](const Network& n) {
      return raw_mse(raw_forecast(n));
    });
    append_rows(report, name, result, config.timing);
    const auto f = raw_forecast(net);
    const double mse = raw_mse(f);
    mses.push_back(mse);
    report.add_summary("parameters-" + name, std::to_string(net.parameter_count()));
    report.add_summary("mse-" + name, mse);
    report.add_summary("mse-normalized-" + name, mse / (series.stddev * series.stddev));
    report.add_summary("detrended-correlation-" + name, detrended_correlation(f, holdout));
    report.add_summary("wall-seconds-" + name, result.epochs.back().wall_seconds);
    Curve c{name == "wpunn" ? "WPUNN forecast" : "LSTM forecast"};
    for (std::size_t i = 0; i < horizon; ++i) {
      c.points.push_back({static_cast<double>(series.train_length + i), f[i]});
    }
    report.curves.push_back(std::move(c));
  }
  report.add_summary("mse-ratio-wpunn-over-lstm", mses[0] / mses[1]);
  report.add_summary("flag-wpunn-over-3x-lstm", mses[0] > 3.0 * mses[1] ? "yes" : "no");
  report.add_summary("x-label", "month index");
  report.add_summary("y-label", "CO2 (ppm)");
  report.sort_rows();
  return report;
}

ExperimentReport run_gradcheck(const ExperimentConfig& config) {
  GradcheckOptions options;
  options.seed = config.seed;
  options.corrupt_kind = config.corrupt;
  const auto rows = run_layer_gradient_checks(options);
  ExperimentReport report{"gradcheck", run_label(config, ""), echo(config)};
  report.metric_name = "max relative error";
  bool all = true;
  for (const auto& row : rows) {
    report.rows.push_back({row.kind, 0, 0.0, row.max_relative_error, std::nullopt});
    all = all && row.passed;
  }
  report.add_summary("tolerance", options.tolerance);
  report.add_summary("trials", std::to_string(options.trials));
  report.add_summary("passed", all ? "yes" : "no");
  report.sort_rows();
  return report;
}

ExperimentReport run_exact_poly(const ExperimentConfig& config) {
  constexpr std::size_t kPolynomials = 50;
  constexpr std::size_t kPoints = 100;
  constexpr double kTolerance = 1e-12;
  ExperimentReport report{"exact-poly", run_label(config, ""), echo(config)};
  report.metric_name = "max scaled deviation";
  std::vector<double> worst_by_degree(11, 0.0);
  std::vector<bool> seen(11, false);
  Rng rng(derive_seed(config.seed, "exact-poly"));
  for (std::size_t k = 0; k < kPolynomials; ++k) {
    const std::size_t d = config.degree.value_or(1 + k % 6);
    const auto p = generate_polynomial(static_cast<int>(d), rng);
    const Network net = build_exact_network(p);
    Tensor points({kPoints, 2});
    for (double& v : points.mutable_data()) v = rng.uniform(-1.0, 1.0);
    const Tensor out = net.predict(points);
    for (std::size_t i = 0; i < kPoints; ++i) {
      const double x = points.at(i, 0), y = points.at(i, 1);
      double magnitude = 0.0;
      for (const auto& t : p.terms) {
        magnitude += std::abs(t.coefficient * std::pow(x, t.x_power) * std::pow(y, t.y_power));
      }
      worst_by_degree[d] =
          std::max(worst_by_degree[d], exact_poly_deviation(out[i], p.evaluate(x, y), magnitude));
    }
    seen[d] = true;
  }
  double worst = 0.0;
  for (std::size_t d = 1; d <= 10; ++d) {
    if (!seen[d]) continue;
    const std::string label = "d" + two_digits(d);
    report.rows.push_back({label, 0, 0.0, worst_by_degree[d], std::nullopt});
    report.add_summary("terms-" + label, std::to_string((d + 1) * (d + 2) / 2));
    worst = std::max(worst, worst_by_degree[d]);
  }
  report.add_summary("polynomials", std::to_string(kPolynomials));
  report.add_summary("points-per-polynomial", std::to_string(kPoints));
  report.add_summary("max-deviation", worst);
  report.add_summary("passed", worst <= kTolerance ? "yes" : "no");
  report.sort_rows();
  return report;
}

ExperimentOutcome run_experiment(const ExperimentConfig& config) {
  validate(config);
  ExperimentOutcome outcome;
  const auto& id = config.experiment_id;
  std::optional<PlotKind> plot;
  if (id == "mnist-stride") {
    outcome.report = run_mnist_stride(config);
    plot = PlotKind::MetricByEpoch;
  } else if (id == "mnist-window") {
    outcome.report = run_mnist_window(config);
    plot = PlotKind::MetricByEpoch;
  } else if (id == "poly") {
    outcome.report = run_poly(config);
    plot = PlotKind::Curves;
  } else if (id == "co2") {
    outcome.report = run_co2(config);
    plot = PlotKind::Curves;
  } else if (id == "gradcheck") {
    outcome.report = run_gradcheck(config);
  } else {
    outcome.report = run_exact_poly(config);
  }
  outcome.passed = outcome.report.summary_value("passed").value_or("yes") == "yes";

  const auto stem = config.out_dir / outcome.report.file_stem();
  auto csv = stem;
  csv += ".csv";
  write_text_file(csv, to_csv(outcome.report));
  outcome.files.push_back(csv);
  if (plot) {
    auto svg = stem;
    svg += ".svg";
    write_text_file(svg, emit_plot(outcome.report, *plot));
    outcome.files.push_back(svg);
  }
  return outcome;
}

void print_summary(std::ostream& out, const ExperimentOutcome& outcome) {
  const auto& r = outcome.report;
  out << r.experiment_id << " [" << r.run_label << "]\n";
  if (r.experiment_id == "gradcheck" || r.experiment_id == "exact-poly") {
    for (const auto& row : r.rows) {
      out << "  " << row.config_label << "  " << r.metric_name << " = "
          << format_number(row.test_metric) << '\n';
    }
  }
  for (const auto& [k, v] : r.summary) {
    if (k == "x-label" || k == "y-label" || k == "log-y") continue;
    out << "  " << k << ": " << v << '\n';
  }
  for (const auto& f : outcome.files) out << "  wrote " << f.string() << '\n';
  out << (outcome.passed ? "OK" : "FAILED") << '\n';
}

}  // namespace wpunn
