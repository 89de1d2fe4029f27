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

#include "wpunn/network.hpp"

#include <charconv>
#include <sstream>

#include "wpunn/error.hpp"
#include "wpunn/recurrent.hpp"
#include "wpunn/rng.hpp"

namespace wpunn {

std::string_view to_string(LayerKind kind) {
  switch (kind) {
    case LayerKind::Dense: return "dense";
    case LayerKind::Window: return "window";
    case LayerKind::ProductUnit: return "product-unit";
    case LayerKind::Sigmoid: return "sigmoid";
    case LayerKind::Tanh: return "tanh";
    case LayerKind::LeakyRelu: return "leaky-relu";
    case LayerKind::LogSoftmax: return "log-softmax";
    case LayerKind::Lstm: return "lstm";
  }
  return "unknown";
}

LayerKind parse_layer_kind(std::string_view text) {
  for (const LayerKind k : {LayerKind::Dense, LayerKind::Window, LayerKind::ProductUnit,
                            LayerKind::Sigmoid, LayerKind::Tanh, LayerKind::LeakyRelu,
                            LayerKind::LogSoftmax, LayerKind::Lstm}) {
    if (to_string(k) == text) return k;
  }
  throw ConfigError("unknown layer kind '" + std::string(text) + "'");
}

namespace {

std::size_t parse_count(std::string_view value, std::string_view key, std::size_t line) {
  std::size_t out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError("network spec line " + std::to_string(line) + ": '" + std::string(key) +
                      "' expects a non-negative integer, got '" + std::string(value) + "'");
  }
  return out;
}

double parse_real(std::string_view value, std::string_view key, std::size_t line) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError("network spec line " + std::to_string(line) + ": '" + std::string(key) +
                      "' expects a number, got '" + std::string(value) + "'");
  }
  return out;
}

std::string format_real(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

NetworkSpec parse_network_spec(std::string_view text) {
  NetworkSpec spec;
  bool seen_input = false;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    std::istringstream tokens(raw);
    std::string head;
    if (!(tokens >> head)) continue;

    LayerDesc desc;
    const bool is_input = head == "input";
    if (!is_input) {
      if (!seen_input) {
        throw ConfigError("network spec line " + std::to_string(line_no) +
                          ": first entry must be 'input width=N'");
      }
      desc.kind = parse_layer_kind(head);
    } else if (seen_input) {
      throw ConfigError("network spec line " + std::to_string(line_no) + ": duplicate 'input'");
    }

    std::string token;
    while (tokens >> token) {
      const auto eq = token.find('=');
      if (eq == std::string::npos) {
        throw ConfigError("network spec line " + std::to_string(line_no) +
                          ": expected key=value, got '" + token + "'");
      }
      const std::string_view key(token.data(), eq);
      const std::string_view value(token.data() + eq + 1, token.size() - eq - 1);
      if (key == "width") {
        (is_input ? spec.input_width : desc.width) = parse_count(value, key, line_no);
      } else if (!is_input && key == "w") {
        desc.window.window = parse_count(value, key, line_no);
      } else if (!is_input && key == "s") {
        desc.window.stride = parse_count(value, key, line_no);
      } else if (!is_input && key == "agg") {
        desc.window.aggregator = parse_aggregator(value);
      } else if (!is_input && key == "slope") {
        desc.slope = parse_real(value, key, line_no);
      } else if (!is_input && key == "recur") {
        desc.recurrent_target = parse_count(value, key, line_no);
      } else {
        throw ConfigError("network spec line " + std::to_string(line_no) + ": unknown key '" +
                          std::string(key) + "' for '" + head + "'");
      }
    }
    if (is_input) {
      seen_input = true;
    } else {
      spec.layers.push_back(desc);
    }
  }
  if (!seen_input) throw ConfigError("network spec: missing 'input width=N'");
  resolve_shapes(spec);
  return spec;
}

std::string to_text(const NetworkSpec& spec) {
  std::ostringstream out;
  out << "input width=" << spec.input_width << '\n';
  for (const auto& layer : spec.layers) {
    out << to_string(layer.kind);
    switch (layer.kind) {
      case LayerKind::Dense:
      case LayerKind::ProductUnit:
      case LayerKind::Lstm:
        out << " width=" << layer.width;
        break;
      case LayerKind::Window:
        out << " w=" << layer.window.window << " s=" << layer.window.stride
            << " agg=" << to_string(layer.window.aggregator);
        break;
      case LayerKind::LeakyRelu:
        out << " slope=" << format_real(layer.slope);
        break;
      default:
        break;
    }
    if (layer.recurrent_target) out << " recur=" << *layer.recurrent_target;
    out << '\n';
  }
  return out.str();
}

std::vector<LayerShape> resolve_shapes(const NetworkSpec& spec) {
  if (spec.input_width == 0) throw ConfigError("network spec: input width must be positive");
  if (spec.layers.empty()) throw ConfigError("network spec: no layers");
  std::vector<LayerShape> shapes(spec.layers.size());
  std::size_t width = spec.input_width;
  for (std::size_t i = 0; i < spec.layers.size(); ++i) {
    const auto& layer = spec.layers[i];
    const std::string where = "layer " + std::to_string(i + 1) + " (" +
                              std::string(to_string(layer.kind)) + ")";
    shapes[i].in = width;
    switch (layer.kind) {
      case LayerKind::Dense:
      case LayerKind::ProductUnit:
      case LayerKind::Lstm:
        if (layer.width == 0) throw ConfigError(where + ": width must be positive");
        width = layer.width;
        break;
      case LayerKind::Window:
        try {
          width = output_width(width, layer.window);
        } catch (const ConfigError& e) {
          throw ConfigError(where + ": " + e.what());
        }
        break;
      default:
        break;
    }
    shapes[i].out = width;
  }
  for (std::size_t j = 0; j < spec.layers.size(); ++j) {
    const auto& target = spec.layers[j].recurrent_target;
    if (!target) continue;
    if (*target < 1 || *target > j) {
      throw ConfigError("layer " + std::to_string(j + 1) + ": recur=" + std::to_string(*target) +
                        " must name an earlier layer");
    }
    if (spec.layers[*target - 1].kind != LayerKind::Dense) {
      throw ConfigError("layer " + std::to_string(j + 1) + ": recurrent target " +
                        std::to_string(*target) + " must be a dense layer");
    }
    shapes[*target - 1].in += shapes[j].out;
  }
  return shapes;
}

std::size_t count_parameters(const NetworkSpec& spec) {
  const auto shapes = resolve_shapes(spec);
  std::size_t total = 0;
  for (std::size_t i = 0; i < spec.layers.size(); ++i) {
    const auto [in, out] = shapes[i];
    switch (spec.layers[i].kind) {
      case LayerKind::Dense: total += out * in + out; break;
      case LayerKind::ProductUnit: total += out * in; break;
      case LayerKind::Lstm: total += 4 * (out * (in + out) + out); break;
      default: break;
    }
  }
  return total;
}

bool is_recurrent(const NetworkSpec& spec) {
  for (const auto& layer : spec.layers) {
    if (layer.recurrent_target || layer.kind == LayerKind::Lstm) return true;
  }
  return false;
}

Network::Network(NetworkSpec spec, Rng& rng) : spec_(std::move(spec)) {
  shapes_ = resolve_shapes(spec_);
  for (std::size_t i = 0; i < spec_.layers.size(); ++i) {
    const auto [in, out] = shapes_[i];
    switch (spec_.layers[i].kind) {
      case LayerKind::Dense: {
        auto layer = DenseLayer::random(in, out, rng);
        params_.push_back(std::move(layer.weights));
        params_.push_back(std::move(layer.biases));
        break;
      }
      case LayerKind::ProductUnit:
        params_.push_back(ProductUnitLayer::random(in, out, rng).exponents);
        break;
      case LayerKind::Lstm: {
        auto cell = LstmCell::random(in, out, rng);
        for (DenseLayer* g :
             {&cell.input_gate, &cell.forget_gate, &cell.output_gate, &cell.candidate}) {
          params_.push_back(std::move(g->weights));
          params_.push_back(std::move(g->biases));
        }
        break;
      }
      default:
        break;
    }
  }
  index_parameters();
}

Network::Network(NetworkSpec spec, std::vector<Tensor> parameters)
    : spec_(std::move(spec)), params_(std::move(parameters)) {
  shapes_ = resolve_shapes(spec_);
  const std::size_t supplied = params_.size();
  index_parameters();
  if (names_.size() != supplied) {
    throw DimensionError("network: expected " + std::to_string(names_.size()) +
                         " parameter tensors, got " + std::to_string(supplied));
  }
}

void Network::index_parameters() {
  names_.clear();
  first_param_.assign(spec_.layers.size(), 0);
  feeds_.assign(spec_.layers.size(), {});
  std::vector<Shape> expected;
  for (std::size_t i = 0; i < spec_.layers.size(); ++i) {
    const auto [in, out] = shapes_[i];
    const std::string prefix = "layer" + std::to_string(i + 1) + ".";
    first_param_[i] = names_.size();
    switch (spec_.layers[i].kind) {
      case LayerKind::Dense:
        names_.push_back(prefix + "weights");
        names_.push_back(prefix + "biases");
        expected.push_back({out, in});
        expected.push_back({out});
        break;
      case LayerKind::ProductUnit:
        names_.push_back(prefix + "exponents");
        expected.push_back({out, in});
        break;
      case LayerKind::Lstm:
        for (const char* gate : {"input", "forget", "output", "candidate"}) {
          names_.push_back(prefix + gate + ".weights");
          names_.push_back(prefix + gate + ".biases");
          expected.push_back({out, in + out});
          expected.push_back({out});
        }
        break;
      default:
        break;
    }
    if (const auto& target = spec_.layers[i].recurrent_target) feeds_[*target - 1].push_back(i);
  }
  for (std::size_t k = 0; k < params_.size() && k < expected.size(); ++k) {
    if (params_[k].shape() != expected[k]) {
      throw DimensionError("network: parameter " + names_[k] + " has shape " +
                           shape_string(params_[k].shape()) + ", expected " +
                           shape_string(expected[k]));
    }
  }
  recurrent_ = is_recurrent(spec_);
}

std::size_t Network::parameter_count() const {
  std::size_t total = 0;
  for (const auto& p : params_) total += p.size();
  return total;
}

std::vector<NodeId> Network::bind(Tape& tape) const {
  std::vector<NodeId> ids;
  ids.reserve(params_.size());
  for (const auto& p : params_) ids.push_back(tape.leaf(p));
  return ids;
}

NodeId Network::forward(Tape& tape, std::span<const NodeId> params, NodeId input,
                        TapeState* state) const {
  if (params.size() != params_.size()) {
    throw ContractError("network: expected " + std::to_string(params_.size()) +
                        " bound parameters, got " + std::to_string(params.size()));
  }
  if (recurrent_ && state == nullptr) {
    throw ContractError("network: recurrent network stepped without state");
  }
  if (tape.value(input).cols() != spec_.input_width) {
    throw DimensionError("network: input " + shape_string(tape.value(input).shape()) +
                         " does not match input width " + std::to_string(spec_.input_width));
  }
  NodeId cur = input;
  for (std::size_t i = 0; i < spec_.layers.size(); ++i) {
    const auto& layer = spec_.layers[i];
    const std::size_t p = first_param_[i];
    for (const std::size_t source : feeds_[i]) {
      cur = concat_cols(tape, cur, state->feedback[source]);
    }
    switch (layer.kind) {
      case LayerKind::Dense: cur = affine(tape, cur, params[p], params[p + 1]); break;
      case LayerKind::Window: cur = window(tape, cur, layer.window); break;
      case LayerKind::ProductUnit: cur = product_unit(tape, cur, params[p]); break;
      case LayerKind::Sigmoid: cur = sigmoid(tape, cur); break;
      case LayerKind::Tanh: cur = tanh(tape, cur); break;
      case LayerKind::LeakyRelu: cur = leaky_relu(tape, cur, layer.slope); break;
      case LayerKind::LogSoftmax: cur = log_softmax(tape, cur); break;
      case LayerKind::Lstm: {
        const LstmNodes next = lstm(tape, cur, {state->hidden[i], state->cell[i]},
                                    std::span<const NodeId, 8>(params.subspan(p, 8)));
        state->hidden[i] = next.hidden;
        state->cell[i] = next.cell;
        cur = next.hidden;
        break;
      }
    }
    if (layer.recurrent_target) state->feedback[i] = cur;
  }
  return cur;
}

Tensor Network::predict(const Tensor& input) const {
  if (recurrent_) throw ContractError("network: predict() on a recurrent network; use step()");
  Tape tape;
  const auto params = bind(tape);
  return tape.value(forward(tape, params, tape.leaf(input)));
}

RecurrentState Network::initial_state() const {
  const std::size_t n = spec_.layers.size();
  RecurrentState state{std::vector<Tensor>(n), std::vector<Tensor>(n), std::vector<Tensor>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    if (spec_.layers[i].recurrent_target) state.feedback[i] = Tensor({shapes_[i].out});
    if (spec_.layers[i].kind == LayerKind::Lstm) {
      state.hidden[i] = Tensor({shapes_[i].out});
      state.cell[i] = Tensor({shapes_[i].out});
    }
  }
  return state;
}

TapeState Network::attach(Tape& tape, const RecurrentState& state) const {
  auto place = [&tape](const std::vector<Tensor>& values) {
    std::vector<NodeId> ids(values.size(), kNoNode);
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (!values[i].empty()) ids[i] = tape.leaf(values[i]);
    }
    return ids;
  };
  return {place(state.feedback), place(state.hidden), place(state.cell)};
}

RecurrentState Network::detach(const Tape& tape, const TapeState& state) const {
  auto read = [&tape](const std::vector<NodeId>& ids) {
    std::vector<Tensor> values(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (ids[i] != kNoNode) values[i] = tape.value(ids[i]);
    }
    return values;
  };
  return {read(state.feedback), read(state.hidden), read(state.cell)};
}

Tensor Network::step(const Tensor& input, RecurrentState& state) const {
  Tape tape;
  const auto params = bind(tape);
  TapeState nodes = attach(tape, state);
  const NodeId out = forward(tape, params, tape.leaf(input), &nodes);
  state = detach(tape, nodes);
  return tape.value(out);
}

}  // namespace wpunn
