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

#include <stdexcept>
#include <string>

namespace wpunn {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand shapes do not fit the operation.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Invalid layer/network/experiment configuration (e.g. stride > window).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Non-finite values, overflow guards, exploding losses.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Bad scalar argument (empty range, out-of-range label, ...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Input outside a function's mathematical domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

// API misuse, such as differentiating a tape twice.
class ContractError : public Error {
 public:
  using Error::Error;
};

// Malformed dataset file. The message names the offending offset or row.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace wpunn
