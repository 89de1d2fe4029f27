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
#include <span>
#include <string_view>
#include <vector>

#include "wpunn/network.hpp"
#include "wpunn/tensor.hpp"

namespace wpunn {

class Rng;

struct ClassificationDataset {
  Tensor features;                  // [n x d]
  std::vector<std::size_t> labels;  // n entries, each < class_count
  std::size_t class_count = 0;

  std::size_t size() const { return labels.size(); }
};

struct RegressionDataset {
  Tensor features;  // [n x d]
  Tensor targets;   // [n]

  std::size_t size() const { return targets.size(); }
};

// First n samples (or all, if n >= size).
ClassificationDataset head(const ClassificationDataset& data, std::size_t n);

// --- MNIST / IDX ---------------------------------------------------------

inline constexpr std::uint32_t kIdxImageMagic = 2051;
inline constexpr std::uint32_t kIdxLabelMagic = 2049;

// Parses IDX image and label buffers: big-endian u32 magic, u32 dimension
// sizes, then raw unsigned bytes. Pixels are divided by 255. Throws
// FormatError naming the byte offset of the problem.
ClassificationDataset parse_mnist(std::span<const std::uint8_t> images,
                                  std::span<const std::uint8_t> labels);
ClassificationDataset load_mnist(const std::filesystem::path& images,
                                 const std::filesystem::path& labels);

// Inverse of parse_mnist for datasets with pixels k/255 (k integer).
std::vector<std::uint8_t> encode_idx_images(const Tensor& features, std::size_t rows,
                                            std::size_t cols);
std::vector<std::uint8_t> encode_idx_labels(std::span<const std::size_t> labels);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);

// --- Polynomials ---------------------------------------------------------

struct Monomial {
  unsigned x_power = 0;
  unsigned y_power = 0;
  double coefficient = 0.0;
};

// Polynomial in two variables x, y.
struct Polynomial {
  unsigned degree = 0;
  std::vector<Monomial> terms;

  // Sum of coefficient * x^a * y^b, each power formed by repeated
  // multiplication.
  double evaluate(double x, double y) const;
};

// Every (a, b) with a + b <= degree, ordered by total degree ascending and
// then by x power descending: (0,0), (1,0), (0,1), (2,0), (1,1), (0,2), ...
std::vector<std::pair<unsigned, unsigned>> monomial_exponents(unsigned degree);

// One term per monomial of total degree <= degree, coefficients uniform in
// [-1, 1). Throws ArgumentError for negative degree.
Polynomial generate_polynomial(int degree, Rng& rng);

// n rows of (x, y) uniform in [-1, 1) with target p(x, y).
RegressionDataset sample_polynomial(const Polynomial& p, std::size_t n, Rng& rng);

// Network that reproduces p exactly:
//   dense 2 -> w*K: block k copies x a_k times, y b_k times and fills the
//                   remaining w - a_k - b_k slots with the constant 1
//                   (zero weights, bias 1)
//   window w, stride w, product -> K monomial values
//   dense K -> 1 with the coefficients as weights, bias 0
// where K is the term count and w = max(degree, 1).
Network build_exact_network(const Polynomial& p);

// --- CO2 series ----------------------------------------------------------

struct SeriesDataset {
  Tensor values;  // [T], file order
  double mean = 0.0;
  double stddev = 1.0;
  std::size_t train_length = 0;

  std::size_t size() const { return values.size(); }
  std::size_t test_length() const { return size() - train_length; }
  std::vector<double> normalized() const;
  double denormalize(double z) const { return z * stddev + mean; }
};

// Parses `year,month,ppm` CSV (header required). Rows must be consecutive
// months. Throws FormatError naming the row on a missing column, non-numeric
// value or gap.
SeriesDataset parse_co2(std::string_view csv);
SeriesDataset load_co2(const std::filesystem::path& path);

// Marks the first floor(fraction * T) values as training data and fits the
// z-score normalisation on that prefix only.
void split_series(SeriesDataset& series, double train_fraction = 0.75);

// First differences x[t+1] - x[t] of the training prefix, z-scored with their
// own mean and stddev.
struct SeriesDifferences {
  std::vector<double> normalized;
  double mean = 0.0;
  double stddev = 1.0;
  double last_level = 0.0;  // final training value

  // Levels reached by accumulating de-normalised steps from last_level.
  std::vector<double> integrate(std::span<const double> normalized_steps) const;
};

SeriesDifferences training_differences(const SeriesDataset& series);

}  // namespace wpunn
