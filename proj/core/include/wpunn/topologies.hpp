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

#include "wpunn/layers.hpp"
#include "wpunn/network.hpp"

namespace wpunn {

// 784 -> dense 300 -> window -> dense 100 -> window -> dense 10 -> log-softmax
NetworkSpec mnist_spec(const WindowConfig& window);

// 2 -> (dense 50 -> window 2/2) x3 -> dense 1: 2776 parameters.
NetworkSpec poly_wpunn_spec();
// 2 -> (dense 50 -> leaky-relu 0.1) x3 -> dense 1: 5301 parameters.
NetworkSpec poly_relu_spec();

inline constexpr std::size_t kPolyWpunnParameters = 2776;
inline constexpr std::size_t kPolyReluParameters = 5301;

// Two gated stages (dense 100 -> sigmoid -> window 2/2 fed back into the
// dense layer) and a dense 1 head.
NetworkSpec co2_wpunn_spec();
// lstm 100 -> lstm 100 -> dense 1.
NetworkSpec co2_lstm_spec();

}  // namespace wpunn
