// Copyright (c) 2026 The AIA Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "aia/models/regressor.hpp"

#include <cmath>

#include "aia/error.hpp"
#include "aia/rng.hpp"

namespace aia::models {

using diff::Graph;
using diff::NdArray;
using diff::Var;

namespace {

NdArray uniform_init(diff::Shape shape, double bound, UnitRng& rng) {
  NdArray a(std::move(shape));
  for (double& v : a.data()) v = rng.in(-bound, bound);
  return a;
}

void require_config(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::kConfig, what);
}

}  // namespace

std::string_view architecture_name(Architecture a) {
  return a == Architecture::kTcn ? "tcn" : "gru";
}

std::optional<Architecture> parse_architecture(std::string_view name) {
  if (name == "tcn") return Architecture::kTcn;
  if (name == "gru") return Architecture::kGru;
  return std::nullopt;
}

TcnConfig TcnConfig::full(std::size_t joints) {
  TcnConfig c;
  c.joints = joints;
  return c;
}

TcnConfig TcnConfig::tiny(std::size_t joints) {
  TcnConfig c;
  c.joints = joints;
  c.hidden_layers = 3;
  c.channels = 32;
  return c;
}

std::vector<std::size_t> TcnConfig::resolved_dilations() const {
  if (!dilations.empty()) return dilations;
  std::vector<std::size_t> d(hidden_layers);
  for (std::size_t i = 0; i < hidden_layers; ++i) d[i] = std::size_t{1} << i;
  return d;
}

void TcnConfig::validate() const {
  require_config(joints >= 1, "tcn: joints must be >= 1");
  require_config(hidden_layers >= 1, "tcn: hidden_layers must be >= 1");
  require_config(channels >= 1, "tcn: channels must be >= 1");
  require_config(kernel_width >= 1, "tcn: kernel_width must be >= 1");
  require_config(dilations.empty() || dilations.size() == hidden_layers,
                 "tcn: need one dilation per hidden layer");
  for (std::size_t d : dilations) require_config(d > 0, "tcn: dilations must be positive");
}

GruConfig GruConfig::full(std::size_t joints) {
  GruConfig c;
  c.joints = joints;
  return c;
}

GruConfig GruConfig::tiny(std::size_t joints) {
  GruConfig c;
  c.joints = joints;
  c.stack = {{1, 32}};
  return c;
}

std::vector<std::size_t> GruConfig::hidden_sizes() const {
  std::vector<std::size_t> out;
  for (const auto& g : stack) out.insert(out.end(), g.num_layers, g.hidden_size);
  return out;
}

void GruConfig::validate() const {
  require_config(joints >= 1, "gru: joints must be >= 1");
  require_config(!stack.empty(), "gru: stack must be non-empty");
  for (const auto& g : stack) {
    require_config(g.num_layers >= 1 && g.hidden_size >= 1,
                   "gru: every stack entry needs num_layers >= 1 and hidden_size >= 1");
  }
}

Json config_to_json(const ModelConfig& config) {
  Json j;
  if (const auto* t = std::get_if<TcnConfig>(&config)) {
    j["joints"] = t->joints;
    j["hidden_layers"] = t->hidden_layers;
    j["channels"] = t->channels;
    j["kernel_width"] = t->kernel_width;
    j["dilations"] = t->resolved_dilations();
  } else {
    const auto& g = std::get<GruConfig>(config);
    j["joints"] = g.joints;
    Json stack = Json::array();
    for (const auto& e : g.stack) stack.push_back({e.num_layers, e.hidden_size});
    j["stack"] = std::move(stack);
  }
  return j;
}

ModelConfig config_from_json(Architecture arch, const Json& doc) {
  try {
    if (arch == Architecture::kTcn) {
      TcnConfig c;
      c.joints = doc.at("joints").get<std::size_t>();
      c.hidden_layers = doc.at("hidden_layers").get<std::size_t>();
      c.channels = doc.at("channels").get<std::size_t>();
      c.kernel_width = doc.at("kernel_width").get<std::size_t>();
      c.dilations = doc.at("dilations").get<std::vector<std::size_t>>();
      c.validate();
      return c;
    }
    GruConfig c;
    c.joints = doc.at("joints").get<std::size_t>();
    c.stack.clear();
    for (const Json& e : doc.at("stack")) {
      c.stack.push_back({e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>()});
    }
    c.validate();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kFormat, std::string("model config: ") + e.what());
  }
}

std::vector<Var> SequenceRegressor::bind_parameters(Graph& graph,
                                                    bool requires_grad) const {
  std::vector<Var> vars;
  vars.reserve(params_.size());
  for (const auto& p : params_) vars.push_back(graph.leaf(p.value, requires_grad));
  return vars;
}

Var SequenceRegressor::forward(Graph& graph, Var input) const {
  const auto params = bind_parameters(graph, false);
  return forward(graph, input, params);
}

void SequenceRegressor::check_input(const diff::Shape& shape) const {
  if (shape.size() != 2 || shape[0] == 0 || shape[1] != feature_dim()) {
    throw ShapeError(std::string(architecture_name(architecture())) +
                     " regressor expects input [T, " + std::to_string(feature_dim()) +
                     "], got " + diff::shape_string(shape));
  }
}

data::SkeletonSequence SequenceRegressor::predict(
    const data::SkeletonSequence& input) const {
  check_input({input.frames(), input.feature_dim()});
  Graph graph;
  const Var x = graph.constant(input.to_array());
  const Var y = forward(graph, x);
  return data::SkeletonSequence::from_array(y.value());
}

TcnRegressor::TcnRegressor(TcnConfig config, std::uint64_t seed)
    : config_(std::move(config)) {
  config_.validate();
  dilations_ = config_.resolved_dilations();
  UnitRng rng(seed);
  const std::size_t dim = feature_dim();
  const std::size_t ch = config_.channels;
  const std::size_t k = config_.kernel_width;
  has_downsample_ = dim != ch;
  for (std::size_t l = 0; l < config_.hidden_layers; ++l) {
    const std::size_t cin = l == 0 ? dim : ch;
    const double bound = 1.0 / std::sqrt(static_cast<double>(k * cin));
    const std::string prefix = "block" + std::to_string(l);
    params_.push_back({prefix + ".conv.weight", uniform_init({k, cin, ch}, bound, rng)});
    params_.push_back({prefix + ".conv.bias", uniform_init({ch}, bound, rng)});
    if (l == 0 && has_downsample_) {
      const double db = 1.0 / std::sqrt(static_cast<double>(cin));
      params_.push_back({prefix + ".downsample.weight", uniform_init({cin, ch}, db, rng)});
    }
  }
  const double hb = 1.0 / std::sqrt(static_cast<double>(ch));
  params_.push_back({"head.weight", uniform_init({ch, dim}, hb, rng)});
  params_.push_back({"head.bias", uniform_init({dim}, hb, rng)});
}

Var TcnRegressor::forward(Graph& /*graph*/, Var input,
                          std::span<const Var> params) const {
  check_input(input.shape());
  if (params.size() != params_.size()) {
    throw Error(ErrorKind::kInvalidArgument, "tcn forward: parameter count mismatch");
  }
  std::size_t p = 0;
  Var h = input;
  for (std::size_t l = 0; l < config_.hidden_layers; ++l) {
    const Var weight = params[p++];
    const Var bias = params[p++];
    const Var z = diff::relu(diff::add_row(diff::causal_conv1d(h, weight, dilations_[l]), bias));
    Var residual = h;
    if (l == 0 && has_downsample_) residual = diff::matmul(h, params[p++]);
    h = diff::add(z, residual);
  }
  const Var head_w = params[p++];
  const Var head_b = params[p++];
  return diff::add_row(diff::matmul(h, head_w), head_b);
}

GruRegressor::GruRegressor(GruConfig config, std::uint64_t seed)
    : config_(std::move(config)) {
  config_.validate();
  hidden_ = config_.hidden_sizes();
  UnitRng rng(seed);
  std::size_t in = feature_dim();
  for (std::size_t l = 0; l < hidden_.size(); ++l) {
    const std::size_t h = hidden_[l];
    const double bound = 1.0 / std::sqrt(static_cast<double>(h));
    const std::string prefix = "gru" + std::to_string(l) + ".";
    for (const char* gate : {"r", "z", "n"}) {
      params_.push_back({prefix + "w_i" + gate, uniform_init({in, h}, bound, rng)});
      params_.push_back({prefix + "w_h" + gate, uniform_init({h, h}, bound, rng)});
      params_.push_back({prefix + "b_i" + gate, uniform_init({h}, bound, rng)});
      params_.push_back({prefix + "b_h" + gate, uniform_init({h}, bound, rng)});
    }
    in = h;
  }
  const double hb = 1.0 / std::sqrt(static_cast<double>(in));
  params_.push_back({"head.weight", uniform_init({in, feature_dim()}, hb, rng)});
  params_.push_back({"head.bias", uniform_init({feature_dim()}, hb, rng)});
}

Var GruRegressor::forward(Graph& graph, Var input,
                          std::span<const Var> params) const {
  check_input(input.shape());
  if (params.size() != params_.size()) {
    throw Error(ErrorKind::kInvalidArgument, "gru forward: parameter count mismatch");
  }
  const std::size_t steps = input.shape()[0];
  std::size_t p = 0;
  Var x = input;
  for (std::size_t h_size : hidden_) {
    // Per gate: w_i, w_h, b_i, b_h. Input projections are computed for all
    // frames at once; only the recurrent part runs step by step.
    struct Gate {
      Var w_h, b_h, projected;
    };
    Gate gates[3];
    for (Gate& gate : gates) {
      const Var w_i = params[p++];
      gate.w_h = params[p++];
      const Var b_i = params[p++];
      gate.b_h = params[p++];
      gate.projected = diff::add_row(diff::matmul(x, w_i), b_i);
    }
    Gate& r_gate = gates[0];
    Gate& z_gate = gates[1];
    Gate& n_gate = gates[2];
    Var h = graph.constant(NdArray({1, h_size}));
    std::vector<Var> outputs;
    outputs.reserve(steps);
    for (std::size_t t = 0; t < steps; ++t) {
      const auto recurrent = [&](const Gate& g) {
        return diff::add_row(diff::matmul(h, g.w_h), g.b_h);
      };
      const Var r = diff::sigmoid(
          diff::add(diff::slice(r_gate.projected, 0, t, t + 1), recurrent(r_gate)));
      const Var z = diff::sigmoid(
          diff::add(diff::slice(z_gate.projected, 0, t, t + 1), recurrent(z_gate)));
      const Var n = diff::tanh(diff::add(diff::slice(n_gate.projected, 0, t, t + 1),
                                         diff::mul(r, recurrent(n_gate))));
      // (1 - z) * n + z * h
      h = diff::add(n, diff::mul(z, diff::sub(h, n)));
      outputs.push_back(h);
    }
    x = diff::concat_rows(outputs);
  }
  const Var head_w = params[p++];
  const Var head_b = params[p++];
  return diff::add_row(diff::matmul(x, head_w), head_b);
}

std::unique_ptr<SequenceRegressor> make_model(const ModelConfig& config,
                                              std::uint64_t seed) {
  if (const auto* t = std::get_if<TcnConfig>(&config)) {
    return std::make_unique<TcnRegressor>(*t, seed);
  }
  return std::make_unique<GruRegressor>(std::get<GruConfig>(config), seed);
}

}  // namespace aia::models
