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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wpunn/error.hpp"
#include "wpunn/report.hpp"

namespace wpunn {

// Raised before any training when a required dataset file is absent.
class DataMissingError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// Settings for one CLI invocation. Unset optionals take the per-experiment
// defaults listed in the README.
struct ExperimentConfig {
  std::string experiment_id;
  std::optional<std::size_t> window;
  std::optional<std::size_t> stride;
  std::optional<std::size_t> degree;
  std::optional<std::size_t> epochs;
  std::optional<std::size_t> subset;
  std::optional<std::size_t> batch_size;
  std::optional<std::size_t> repeats;
  std::optional<double> learning_rate;
  std::uint64_t seed = 1;
  std::filesystem::path out_dir = "results";
  std::filesystem::path data_dir;  // empty: default_data_dir()
  bool timing = false;
  std::string corrupt;  // gradcheck negative control: layer kind to corrupt
};

const std::vector<std::string>& experiment_ids();

// Applies one `key=value` setting. Keys: experiment, w, s, d, lr, epochs,
// seed, subset, batch, repeats, out, data, timing, corrupt.
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value);
// Parses a key=value file body (blank lines and `#` comments ignored) on top
// of base.
ExperimentConfig parse_config_text(std::string_view text, ExperimentConfig base = {});

// Throws ConfigError for an unknown id or out-of-range override
// (1 <= s <= w, 1 <= d <= 10, lr > 0, epochs >= 1).
void validate(const ExperimentConfig& config);

// $WPUNN_DATA if set, otherwise ./data.
std::filesystem::path default_data_dir();
std::filesystem::path resolve_data_dir(const ExperimentConfig& config);

ExperimentReport run_mnist_stride(const ExperimentConfig& config);
ExperimentReport run_mnist_window(const ExperimentConfig& config);
ExperimentReport run_poly(const ExperimentConfig& config);
ExperimentReport run_co2(const ExperimentConfig& config);
ExperimentReport run_gradcheck(const ExperimentConfig& config);
ExperimentReport run_exact_poly(const ExperimentConfig& config);

struct ExperimentOutcome {
  ExperimentReport report;
  bool passed = true;
  std::vector<std::filesystem::path> files;
};

// Validates, runs the experiment named by config.experiment_id, and writes
// {id}-{label}.csv (and .svg for the figure experiments) to config.out_dir.
// passed is false when a hard check inside the run failed.
ExperimentOutcome run_experiment(const ExperimentConfig& config);

void print_summary(std::ostream& out, const ExperimentOutcome& outcome);

// Pearson correlation of a and b after removing each one's least-squares
// linear trend over the index.
double detrended_correlation(std::span<const double> a, std::span<const double> b);

// |net - direct| / max(|direct|, sum_k |c_k m_k|): error relative to the
// magnitude of the terms being summed.
double exact_poly_deviation(double network_value, double direct_value, double term_magnitude);

}  // namespace wpunn
