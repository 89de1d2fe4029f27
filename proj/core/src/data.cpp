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

#include "wpunn/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include "wpunn/error.hpp"
#include "wpunn/rng.hpp"

namespace wpunn {

ClassificationDataset head(const ClassificationDataset& data, std::size_t n) {
  n = std::min(n, data.size());
  const std::size_t d = data.features.cols();
  std::vector<double> values(data.features.data().begin(),
                             data.features.data().begin() + static_cast<std::ptrdiff_t>(n * d));
  return {Tensor::matrix(n, d, std::move(values)),
          std::vector<std::size_t>(data.labels.begin(),
                                   data.labels.begin() + static_cast<std::ptrdiff_t>(n)),
          data.class_count};
}

namespace {

std::uint32_t read_u32(std::span<const std::uint8_t> bytes, std::size_t offset, const char* what) {
  if (offset + 4 > bytes.size()) {
    throw FormatError(std::string(what) + ": truncated header at offset " +
                      std::to_string(offset) + " (file has " + std::to_string(bytes.size()) +
                      " bytes)");
  }
  return (std::uint32_t{bytes[offset]} << 24) | (std::uint32_t{bytes[offset + 1]} << 16) |
         (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

}  // namespace

ClassificationDataset parse_mnist(std::span<const std::uint8_t> images,
                                  std::span<const std::uint8_t> labels) {
  if (const auto magic = read_u32(images, 0, "idx images"); magic != kIdxImageMagic) {
    throw FormatError("idx images: bad magic " + std::to_string(magic) + " at offset 0, expected " +
                      std::to_string(kIdxImageMagic));
  }
  const std::size_t n = read_u32(images, 4, "idx images");
  const std::size_t rows = read_u32(images, 8, "idx images");
  const std::size_t cols = read_u32(images, 12, "idx images");
  const std::size_t pixels = rows * cols;
  constexpr std::size_t image_header = 16;
  if (images.size() != image_header + n * pixels) {
    throw FormatError("idx images: expected " + std::to_string(n * pixels) +
                      " pixel bytes from offset 16, file holds " +
                      std::to_string(images.size() - image_header) + " (mismatch at offset " +
                      std::to_string(std::min(images.size(), image_header + n * pixels)) + ")");
  }

  if (const auto magic = read_u32(labels, 0, "idx labels"); magic != kIdxLabelMagic) {
    throw FormatError("idx labels: bad magic " + std::to_string(magic) + " at offset 0, expected " +
                      std::to_string(kIdxLabelMagic));
  }
  const std::size_t label_count = read_u32(labels, 4, "idx labels");
  constexpr std::size_t label_header = 8;
  if (label_count != n) {
    throw FormatError("idx labels: count " + std::to_string(label_count) +
                      " at offset 4 does not match " + std::to_string(n) + " images");
  }
  if (labels.size() != label_header + n) {
    throw FormatError("idx labels: expected " + std::to_string(n) +
                      " label bytes from offset 8, file holds " +
                      std::to_string(labels.size() - label_header));
  }

  ClassificationDataset data;
  data.class_count = 10;
  std::vector<double> features(n * pixels);
  for (std::size_t i = 0; i < features.size(); ++i) {
    features[i] = static_cast<double>(images[image_header + i]) / 255.0;
  }
  data.features = Tensor::matrix(n, pixels, std::move(features));
  data.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t label = labels[label_header + i];
    if (label >= data.class_count) {
      throw FormatError("idx labels: label " + std::to_string(label) + " at offset " +
                        std::to_string(label_header + i) + " is not a digit");
    }
    data.labels[i] = label;
  }
  return data;
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

ClassificationDataset load_mnist(const std::filesystem::path& images,
                                 const std::filesystem::path& labels) {
  const auto image_bytes = read_file_bytes(images);
  const auto label_bytes = read_file_bytes(labels);
  try {
    return parse_mnist(image_bytes, label_bytes);
  } catch (const FormatError& e) {
    throw FormatError(images.filename().string() + "/" + labels.filename().string() + ": " +
                      e.what());
  }
}

std::vector<std::uint8_t> encode_idx_images(const Tensor& features, std::size_t rows,
                                            std::size_t cols) {
  if (features.rank() != 2 || features.cols() != rows * cols) {
    throw DimensionError("encode_idx_images: features " + shape_string(features.shape()) +
                         " are not " + std::to_string(rows) + "x" + std::to_string(cols) +
                         " images");
  }
  std::vector<std::uint8_t> out;
  out.reserve(16 + features.size());
  put_u32(out, kIdxImageMagic);
  put_u32(out, static_cast<std::uint32_t>(features.rows()));
  put_u32(out, static_cast<std::uint32_t>(rows));
  put_u32(out, static_cast<std::uint32_t>(cols));
  for (const double v : features.data()) {
    out.push_back(static_cast<std::uint8_t>(std::clamp(std::lround(v * 255.0), 0L, 255L)));
  }
  return out;
}

std::vector<std::uint8_t> encode_idx_labels(std::span<const std::size_t> labels) {
  std::vector<std::uint8_t> out;
  out.reserve(8 + labels.size());
  put_u32(out, kIdxLabelMagic);
  put_u32(out, static_cast<std::uint32_t>(labels.size()));
  for (const std::size_t l : labels) out.push_back(static_cast<std::uint8_t>(l));
  return out;
}

double Polynomial::evaluate(double x, double y) const {
  double total = 0.0;
  for (const auto& term : terms) {
    double m = 1.0;
    for (unsigned i = 0; i < term.x_power; ++i) m *= x;
    for (unsigned i = 0; i < term.y_power; ++i) m *= y;
    total += term.coefficient * m;
  }
  return total;
}

std::vector<std::pair<unsigned, unsigned>> monomial_exponents(unsigned degree) {
  std::vector<std::pair<unsigned, unsigned>> out;
  out.reserve((degree + 1) * (degree + 2) / 2);
  for (unsigned total = 0; total <= degree; ++total) {
    for (unsigned a = total + 1; a-- > 0;) out.emplace_back(a, total - a);
  }
  return out;
}

Polynomial generate_polynomial(int degree, Rng& rng) {
  if (degree < 0) {
    throw ArgumentError("generate_polynomial: degree must be non-negative, got " +
                        std::to_string(degree));
  }
  Polynomial p;
  p.degree = static_cast<unsigned>(degree);
  for (const auto& [a, b] : monomial_exponents(p.degree)) {
    p.terms.push_back({a, b, rng.uniform(-1.0, 1.0)});
  }
  return p;
}

RegressionDataset sample_polynomial(const Polynomial& p, std::size_t n, Rng& rng) {
  if (n < 1) throw ArgumentError("sample_polynomial: need at least one sample");
  RegressionDataset data{Tensor({n, 2}), Tensor({n})};
  auto f = data.features.mutable_data();
  for (std::size_t i = 0; i < n; ++i) {
    f[2 * i] = rng.uniform(-1.0, 1.0);
    f[2 * i + 1] = rng.uniform(-1.0, 1.0);
    data.targets[i] = p.evaluate(f[2 * i], f[2 * i + 1]);
  }
  return data;
}

Network build_exact_network(const Polynomial& p) {
  if (p.terms.empty()) throw ArgumentError("build_exact_network: polynomial has no terms");
  const std::size_t w = std::max(1U, p.degree);
  const std::size_t k = p.terms.size();

  Tensor weights({w * k, 2});
  Tensor biases({w * k});
  Tensor coefficients({1, k});
  for (std::size_t t = 0; t < k; ++t) {
    const auto& term = p.terms[t];
    if (term.x_power + term.y_power > w) {
      throw ArgumentError("build_exact_network: term degree exceeds declared degree " +
                          std::to_string(p.degree));
    }
    std::size_t slot = t * w;
    for (unsigned i = 0; i < term.x_power; ++i, ++slot) weights.mutable_row(slot)[0] = 1.0;
    for (unsigned i = 0; i < term.y_power; ++i, ++slot) weights.mutable_row(slot)[1] = 1.0;
    for (; slot < (t + 1) * w; ++slot) biases[slot] = 1.0;
    coefficients[t] = term.coefficient;
  }

  NetworkSpec spec;
  spec.input_width = 2;
  spec.layers.push_back({LayerKind::Dense, w * k});
  spec.layers.push_back({LayerKind::Window, 0, {w, w, Aggregator::Product}});
  spec.layers.push_back({LayerKind::Dense, 1});
  return Network(std::move(spec), {std::move(weights), std::move(biases),
                                   std::move(coefficients), Tensor({1})});
}

std::vector<double> SeriesDataset::normalized() const {
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (values[i] - mean) / stddev;
  return out;
}

namespace {

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  for (auto& f : fields) {
    while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) f.remove_prefix(1);
    while (!f.empty() && (f.back() == ' ' || f.back() == '\t' || f.back() == '\r')) {
      f.remove_suffix(1);
    }
  }
  return fields;
}

template <typename T>
T parse_field(std::string_view field, const char* column, std::size_t row) {
  T value{};
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
    throw FormatError("co2 csv row " + std::to_string(row) + ": column '" + column +
                      "' is not numeric ('" + std::string(field) + "')");
  }
  return value;
}

}  // namespace

SeriesDataset parse_co2(std::string_view csv) {
  if (csv.starts_with("\xEF\xBB\xBF")) csv.remove_prefix(3);
  std::istringstream in{std::string(csv)};
  std::string line;
  std::size_t row = 0;
  std::size_t year_col = 0, month_col = 0, ppm_col = 0;
  bool have_header = false;
  std::vector<double> values;
  long previous_month_index = 0;

  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv(line);
    if (!have_header) {
      auto find = [&](std::string_view name) {
        const auto it = std::ranges::find(fields, name);
        if (it == fields.end()) {
          throw FormatError("co2 csv row " + std::to_string(row) + ": missing column '" +
                            std::string(name) + "' in header");
        }
        return static_cast<std::size_t>(it - fields.begin());
      };
      year_col = find("year");
      month_col = find("month");
      ppm_col = find("ppm");
      have_header = true;
      continue;
    }
    if (fields.size() <= std::max({year_col, month_col, ppm_col})) {
      throw FormatError("co2 csv row " + std::to_string(row) + ": expected at least " +
                        std::to_string(std::max({year_col, month_col, ppm_col}) + 1) +
                        " columns, got " + std::to_string(fields.size()));
    }
    const long year = parse_field<long>(fields[year_col], "year", row);
    const long month = parse_field<long>(fields[month_col], "month", row);
    const double ppm = parse_field<double>(fields[ppm_col], "ppm", row);
    if (month < 1 || month > 12) {
      throw FormatError("co2 csv row " + std::to_string(row) + ": month " +
                        std::to_string(month) + " out of range");
    }
    if (!std::isfinite(ppm)) {
      throw FormatError("co2 csv row " + std::to_string(row) + ": ppm is not finite");
    }
    const long index = year * 12 + (month - 1);
    if (!values.empty() && index != previous_month_index + 1) {
      throw FormatError("co2 csv row " + std::to_string(row) + ": " + std::to_string(year) + "-" +
                        std::to_string(month) + " does not follow the previous month");
    }
    previous_month_index = index;
    values.push_back(ppm);
  }
  if (!have_header) throw FormatError("co2 csv row 1: missing header 'year,month,ppm'");
  if (values.empty()) throw FormatError("co2 csv: no data rows");

  SeriesDataset series;
  series.values = Tensor::vector(std::move(values));
  split_series(series);
  return series;
}

SeriesDataset load_co2(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_co2(text.str());
  } catch (const FormatError& e) {
    throw FormatError(path.filename().string() + ": " + e.what());
  }
}

void split_series(SeriesDataset& series, double train_fraction) {
  if (!(train_fraction > 0.0 && train_fraction <= 1.0)) {
    throw ArgumentError("split_series: fraction must lie in (0, 1]");
  }
  const std::size_t total = series.size();
  const auto train = static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(total)));
  series.train_length = std::max<std::size_t>(1, train);
  double mean = 0.0;
  for (std::size_t i = 0; i < series.train_length; ++i) mean += series.values[i];
  mean /= static_cast<double>(series.train_length);
  double var = 0.0;
  for (std::size_t i = 0; i < series.train_length; ++i) {
    var += (series.values[i] - mean) * (series.values[i] - mean);
  }
  var /= static_cast<double>(series.train_length);
  series.mean = mean;
  // A constant prefix would make the z-score undefined.
  series.stddev = var > 0.0 ? std::sqrt(var) : 1.0;
}

SeriesDifferences training_differences(const SeriesDataset& series) {
  if (series.train_length < 2) {
    throw ArgumentError("training_differences: need at least 2 training values");
  }
  const auto values = series.values.data();
  SeriesDifferences out;
  out.last_level = values[series.train_length - 1];
  std::vector<double> steps(series.train_length - 1);
  for (std::size_t t = 0; t + 1 < series.train_length; ++t) steps[t] = values[t + 1] - values[t];
  for (const double d : steps) out.mean += d;
  out.mean /= static_cast<double>(steps.size());
  double var = 0.0;
  for (const double d : steps) var += (d - out.mean) * (d - out.mean);
  var /= static_cast<double>(steps.size());
  out.stddev = var > 0.0 ? std::sqrt(var) : 1.0;
  out.normalized.reserve(steps.size());
  for (const double d : steps) out.normalized.push_back((d - out.mean) / out.stddev);
  return out;
}

std::vector<double> SeriesDifferences::integrate(std::span<const double> normalized_steps) const {
  std::vector<double> levels;
  levels.reserve(normalized_steps.size());
  double level = last_level;
  for (const double z : normalized_steps) {
    level += z * stddev + mean;
    levels.push_back(level);
  }
  return levels;
}

}  // namespace wpunn
