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
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace wpunn {

struct MetricRow {
  std::string config_label;
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double test_metric = 0.0;
  std::optional<double> wall_seconds;  // empty unless timing was requested
};

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct Curve {
  std::string name;
  std::vector<Point> points;
  bool markers = false;  // scatter instead of polyline
};

struct ExperimentReport {
  std::string experiment_id;
  std::string run_label;
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<MetricRow> rows;
  std::vector<std::pair<std::string, std::string>> summary;
  // Extra series for figures that are not metric-vs-epoch.
  std::vector<Curve> curves;
  std::string metric_name = "test-metric";

  std::string file_stem() const { return experiment_id + "-" + run_label; }
  void sort_rows();
  void add_summary(std::string key, std::string value);
  void add_summary(std::string key, double value);
  std::optional<std::string> summary_value(const std::string& key) const;
};

// Shortest round-trip decimal form of a double.
std::string format_number(double value);

// Columns: experiment-id,config-label,epoch,train-loss,test-metric,wall-seconds
std::string to_csv(const ExperimentReport& report);

struct ChartOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;
};

// Self-contained SVG line/scatter chart with axes, ticks and a legend.
std::string render_svg(const std::vector<Curve>& curves, const ChartOptions& options);

enum class PlotKind {
  MetricByEpoch,  // one polyline per config label, test metric against epoch
  Curves,         // the report's own curves
};

// Throws ArgumentError for an empty report.
std::string emit_plot(const ExperimentReport& report, PlotKind kind);

void write_text_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace wpunn
