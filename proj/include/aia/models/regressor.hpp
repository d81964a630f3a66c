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

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

#include "aia/data/skeleton.hpp"
#include "aia/diff/graph.hpp"

namespace aia::models {

using Json = nlohmann::ordered_json;

enum class Architecture { kTcn, kGru };

std::string_view architecture_name(Architecture a);
std::optional<Architecture> parse_architecture(std::string_view name);

// Stack of dilated causal convolutions with residual connections and ReLU,
// followed by a per-frame linear head back to 3N coordinates.
struct TcnConfig {
  std::size_t joints = data::kDefaultJoints;
  std::size_t hidden_layers = 10;
  std::size_t channels = 256;
  std::size_t kernel_width = 3;
  // Empty means doubling: 1, 2, 4, ...
  std::vector<std::size_t> dilations;

  static TcnConfig full(std::size_t joints = data::kDefaultJoints);
  static TcnConfig tiny(std::size_t joints = data::kDefaultJoints);

  std::vector<std::size_t> resolved_dilations() const;
  void validate() const;
};

struct GruLayerGroup {
  std::size_t num_layers = 1;
  std::size_t hidden_size = 32;
};

// Stacked gated recurrent encoder with a per-timestep linear head.
struct GruConfig {
  std::size_t joints = data::kDefaultJoints;
  std::vector<GruLayerGroup> stack = {{2, 512}, {2, 256}, {1, 128}};

  static GruConfig full(std::size_t joints = data::kDefaultJoints);
  static GruConfig tiny(std::size_t joints = data::kDefaultJoints);

  std::vector<std::size_t> hidden_sizes() const;
  void validate() const;
};

using ModelConfig = std::variant<TcnConfig, GruConfig>;

Json config_to_json(const ModelConfig& config);
ModelConfig config_from_json(Architecture arch, const Json& doc);

struct NamedParameter {
  std::string name;
  diff::NdArray value;
};

// Causal sequence-to-sequence regressor: output frame t depends only on input
// frames 1..t. Prediction is const and safe to call from several threads.
class SequenceRegressor {
 public:
  virtual ~SequenceRegressor() = default;

  virtual Architecture architecture() const = 0;
  virtual ModelConfig config() const = 0;
  virtual std::size_t joints() const = 0;
  std::size_t feature_dim() const { return joints() * data::kCoordsPerJoint; }

  // input: [T, 3N] node; params: one node per parameters() entry, same order.
  virtual diff::Var forward(diff::Graph& graph, diff::Var input,
                            std::span<const diff::Var> params) const = 0;

  std::vector<NamedParameter>& parameters() noexcept { return params_; }
  const std::vector<NamedParameter>& parameters() const noexcept { return params_; }

  std::vector<diff::Var> bind_parameters(diff::Graph& graph, bool requires_grad) const;
  // Forward pass with parameters bound as constants.
  diff::Var forward(diff::Graph& graph, diff::Var input) const;

  data::SkeletonSequence predict(const data::SkeletonSequence& input) const;

  void check_input(const diff::Shape& shape) const;

 protected:
  std::vector<NamedParameter> params_;
};

class TcnRegressor final : public SequenceRegressor {
 public:
  TcnRegressor(TcnConfig config, std::uint64_t seed);

  Architecture architecture() const override { return Architecture::kTcn; }
  ModelConfig config() const override { return config_; }
  std::size_t joints() const override { return config_.joints; }
  diff::Var forward(diff::Graph& graph, diff::Var input,
                    std::span<const diff::Var> params) const override;
  using SequenceRegressor::forward;

 private:
  TcnConfig config_;
  std::vector<std::size_t> dilations_;
  bool has_downsample_ = false;
};

class GruRegressor final : public SequenceRegressor {
 public:
  GruRegressor(GruConfig config, std::uint64_t seed);

  Architecture architecture() const override { return Architecture::kGru; }
  ModelConfig config() const override { return config_; }
  std::size_t joints() const override { return config_.joints; }
  diff::Var forward(diff::Graph& graph, diff::Var input,
                    std::span<const diff::Var> params) const override;
  using SequenceRegressor::forward;

 private:
  GruConfig config_;
  std::vector<std::size_t> hidden_;
};

std::unique_ptr<SequenceRegressor> make_model(const ModelConfig& config,
                                              std::uint64_t seed);

}  // namespace aia::models
