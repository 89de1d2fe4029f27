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

#include "wpunn/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "wpunn/error.hpp"

namespace wpunn {

void ExperimentReport::sort_rows() {
  std::stable_sort(rows.begin(), rows.end(), [](const MetricRow& a, const MetricRow& b) {
    if (a.config_label != b.config_label) return a.config_label < b.config_label;
    return a.epoch < b.epoch;
  });
}

void ExperimentReport::add_summary(std::string key, std::string value) {
  summary.emplace_back(std::move(key), std::move(value));
}

void ExperimentReport::add_summary(std::string key, double value) {
  summary.emplace_back(std::move(key), format_number(value));
}

std::optional<std::string> ExperimentReport::summary_value(const std::string& key) const {
  for (const auto& [k, v] : summary) {
    if (k == key) return v;
  }
  return std::nullopt;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::string to_csv(const ExperimentReport& report) {
  std::string out = "experiment-id,config-label,epoch,train-loss,test-metric,wall-seconds\n";
  for (const auto& row : report.rows) {
    out += report.experiment_id;
    out += ',';
    out += row.config_label;
    out += ',';
    out += std::to_string(row.epoch);
    out += ',';
    out += format_number(row.train_loss);
    out += ',';
    out += format_number(row.test_metric);
    out += ',';
    if (row.wall_seconds) out += format_number(*row.wall_seconds);
    out += '\n';
  }
  return out;
}

namespace {

constexpr double kWidth = 800, kHeight = 500;
constexpr double kLeft = 80, kRight = 200, kTop = 50, kBottom = 60;
constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& text) {
  std::string out;
  for (const char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

double nice_step(double span, int target_ticks) {
  const double raw = span / target_ticks;
  const double magnitude = std::pow(10.0, std::floor(std::log10(raw)));
  const double fraction = raw / magnitude;
  const double nice = fraction < 1.5 ? 1 : fraction < 3 ? 2 : fraction < 7 ? 5 : 10;
  return nice * magnitude;
}

struct Axis {
  double lo = 0, hi = 1;
  bool log = false;

  double map(double v) const {
    const double t = log ? (std::log10(v) - lo) / (hi - lo) : (v - lo) / (hi - lo);
    return t;
  }
};

}  // namespace

std::string render_svg(const std::vector<Curve>& curves, const ChartOptions& options) {
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (const auto& c : curves) {
    for (const auto& p : c.points) {
      if (!std::isfinite(p.x) || !std::isfinite(p.y)) continue;
      if (options.log_y && p.y <= 0) continue;
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      const double y = options.log_y ? std::log10(p.y) : p.y;
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (xmax == xmin) xmin -= 0.5, xmax += 0.5;
  if (ymax == ymin) ymin -= 0.5, ymax += 0.5;
  if (options.log_y) {
    ymin = std::floor(ymin);
    ymax = std::ceil(ymax);
  } else {
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;
  }
  const Axis xa{xmin, xmax, false};
  const Axis ya{ymin, ymax, options.log_y};
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + xa.map(x) * plot_w; };
  auto py = [&](double y) { return kTop + (1.0 - ya.map(y)) * plot_h; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << fixed(kLeft + plot_w / 2) << "\" y=\"28\" text-anchor=\"middle\" "
      << "font-size=\"16\">" << escape(options.title) << "</text>\n";

  // Axes and ticks.
  svg << "<g stroke=\"black\" fill=\"none\">\n";
  svg << "<line x1=\"" << fixed(kLeft) << "\" y1=\"" << fixed(kTop + plot_h) << "\" x2=\""
      << fixed(kLeft + plot_w) << "\" y2=\"" << fixed(kTop + plot_h) << "\"/>\n";
  svg << "<line x1=\"" << fixed(kLeft) << "\" y1=\"" << fixed(kTop) << "\" x2=\"" << fixed(kLeft)
      << "\" y2=\"" << fixed(kTop + plot_h) << "\"/>\n";
  svg << "</g>\n<g font-size=\"11\">\n";
  const double xstep = nice_step(xmax - xmin, 6);
  for (double t = std::ceil(xmin / xstep) * xstep; t <= xmax + 1e-9 * xstep; t += xstep) {
    svg << "<line x1=\"" << fixed(px(t)) << "\" y1=\"" << fixed(kTop + plot_h) << "\" x2=\""
        << fixed(px(t)) << "\" y2=\"" << fixed(kTop + plot_h + 5) << "\" stroke=\"black\"/>";
    svg << "<text x=\"" << fixed(px(t)) << "\" y=\"" << fixed(kTop + plot_h + 18)
        << "\" text-anchor=\"middle\">" << tick_label(t) << "</text>\n";
  }
  if (options.log_y) {
    for (double e = ymin; e <= ymax + 1e-9; e += 1.0) {
      const double v = std::pow(10.0, e);
      svg << "<line x1=\"" << fixed(kLeft - 5) << "\" y1=\"" << fixed(py(v)) << "\" x2=\""
          << fixed(kLeft) << "\" y2=\"" << fixed(py(v)) << "\" stroke=\"black\"/>";
      svg << "<text x=\"" << fixed(kLeft - 8) << "\" y=\"" << fixed(py(v) + 4)
          << "\" text-anchor=\"end\">" << tick_label(v) << "</text>\n";
    }
  } else {
    const double ystep = nice_step(ymax - ymin, 6);
    for (double t = std::ceil(ymin / ystep) * ystep; t <= ymax + 1e-9 * ystep; t += ystep) {
      svg << "<line x1=\"" << fixed(kLeft - 5) << "\" y1=\"" << fixed(py(t)) << "\" x2=\""
          << fixed(kLeft) << "\" y2=\"" << fixed(py(t)) << "\" stroke=\"black\"/>";
      svg << "<text x=\"" << fixed(kLeft - 8) << "\" y=\"" << fixed(py(t) + 4)
          << "\" text-anchor=\"end\">" << tick_label(std::abs(t) < 1e-12 * ystep ? 0.0 : t)
          << "</text>\n";
    }
  }
  svg << "</g>\n";
  svg << "<text x=\"" << fixed(kLeft + plot_w / 2) << "\" y=\"" << fixed(kHeight - 15)
      << "\" text-anchor=\"middle\">" << escape(options.x_label) << "</text>\n";
  svg << "<text transform=\"translate(20 " << fixed(kTop + plot_h / 2)
      << ") rotate(-90)\" text-anchor=\"middle\">" << escape(options.y_label) << "</text>\n";

  // Series.
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const auto& c = curves[i];
    const char* color = kPalette[i % std::size(kPalette)];
    svg << "<g class=\"series\" data-name=\"" << escape(c.name) << "\">\n";
    if (c.markers) {
      for (const auto& p : c.points) {
        if (!std::isfinite(p.y) || (options.log_y && p.y <= 0)) continue;
        svg << "<circle cx=\"" << fixed(px(p.x)) << "\" cy=\"" << fixed(py(p.y))
            << "\" r=\"2\" fill=\"" << color << "\"/>\n";
      }
    } else {
      svg << "<polyline fill=\"none\" stroke-width=\"1.5\" stroke=\"" << color << "\" points=\"";
      bool first = true;
      for (const auto& p : c.points) {
        if (!std::isfinite(p.y) || (options.log_y && p.y <= 0)) continue;
        if (!first) svg << ' ';
        svg << fixed(px(p.x)) << ',' << fixed(py(p.y));
        first = false;
      }
      svg << "\"/>\n";
    }
    svg << "</g>\n";
  }

  // Legend.
  const double lx = kLeft + plot_w + 15;
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const double ly = kTop + 10 + 18.0 * static_cast<double>(i);
    const char* color = kPalette[i % std::size(kPalette)];
    svg << "<rect x=\"" << fixed(lx) << "\" y=\"" << fixed(ly - 8) << "\" width=\"12\" "
        << "height=\"12\" fill=\"" << color << "\"/>";
    svg << "<text x=\"" << fixed(lx + 18) << "\" y=\"" << fixed(ly + 2) << "\">"
        << escape(curves[i].name) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string emit_plot(const ExperimentReport& report, PlotKind kind) {
  ChartOptions options;
  options.title = report.experiment_id + " (" + report.run_label + ")";
  std::vector<Curve> curves;
  if (kind == PlotKind::MetricByEpoch) {
    if (report.rows.empty()) throw ArgumentError("emit_plot: report has no metric rows");
    std::map<std::string, Curve> by_label;
    for (const auto& row : report.rows) {
      auto& c = by_label[row.config_label];
      c.name = row.config_label;
      c.points.push_back({static_cast<double>(row.epoch), row.test_metric});
    }
    for (auto& [label, c] : by_label) curves.push_back(std::move(c));
    options.x_label = "epoch";
    options.y_label = report.metric_name;
  } else {
    if (report.curves.empty()) throw ArgumentError("emit_plot: report has no curves");
    curves = report.curves;
    options.x_label = report.summary_value("x-label").value_or("x");
    options.y_label = report.summary_value("y-label").value_or("y");
    options.log_y = report.summary_value("log-y").value_or("false") == "true";
  }
  return render_svg(curves, options);
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArgumentError("cannot write " + path.string());
  out << contents;
}

}  // namespace wpunn
