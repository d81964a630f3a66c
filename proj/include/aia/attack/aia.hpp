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
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "aia/data/skeleton.hpp"
#include "aia/diff/adam.hpp"
#include "aia/diff/graph.hpp"
#include "aia/models/regressor.hpp"

namespace aia::attack {

using Json = nlohmann::ordered_json;

enum class UpdateRule { kSignPgd, kAdam };

std::string_view update_rule_name(UpdateRule rule);
std::optional<UpdateRule> parse_update_rule(std::string_view name);

// Which per-frame coordinates may be perturbed; applies to every frame.
class PerturbationMask {
 public:
  PerturbationMask() = default;
  explicit PerturbationMask(std::vector<bool> enabled) : enabled_(std::move(enabled)) {}

  static PerturbationMask depth_only(std::size_t joints);
  static PerturbationMask all(std::size_t joints);

  std::size_t size() const noexcept { return enabled_.size(); }
  bool operator[](std::size_t feature) const { return enabled_[feature]; }
  std::string_view name() const;

 private:
  std::vector<bool> enabled_;
};

struct AttackConfig {
  double epsilon = 0.45;
  double alpha = 0.03;
  std::size_t steps = 400;
  // Weight of the temporal term, in [0, 1].
  double lambda = 0.1;
  // Tolerance on the summed per-frame output distance; eta = kappa / T.
  double kappa = 0.0;
  data::SkeletonSequence target;
  PerturbationMask mask;
  UpdateRule update_rule = UpdateRule::kSignPgd;
  double adam_learning_rate = 1e-3;
  // Clamp iterates to the SBU coordinate domain after the epsilon projection.
  bool clamp_to_domain = true;
  // Report the iterate with the smallest output distance sum instead of the
  // last one.
  bool keep_best = true;

  void validate(std::size_t frames, std::size_t joints) const;
};

struct AttackResult {
  data::SkeletonSequence adversarial;
  data::SkeletonSequence natural_output;
  data::SkeletonSequence adversarial_output;
  // Adversarial loss at X'_0 .. X'_{M-1}.
  std::vector<double> loss_trace;
  // Output distance sum at X'_0 .. X'_M.
  std::vector<double> distance_trace;
  double initial_distance_sum = 0.0;
  double distance_sum = 0.0;
  std::size_t selected_step = 0;
  bool success = false;
  double max_perturbation = 0.0;
};

// L_spatial(f(X'), Y', kappa/T) + lambda * L_temporal(X') as a node of `graph`.
diff::Var adversarial_loss(const models::SequenceRegressor& model, diff::Graph& graph,
                           diff::Var adversarial, const diff::NdArray& target,
                           const AttackConfig& config);

// One projected update. Sign rule: X' - alpha * sign(grad); Adam rule: an Adam
// step on X' (state in `adam`). The result is clipped to the epsilon box
// around X, masked-off coordinates are restored from X, and optionally the
// coordinate domain is enforced.
data::SkeletonSequence pgd_step(const data::SkeletonSequence& original,
                                const data::SkeletonSequence& current,
                                const diff::NdArray& grad, const AttackConfig& config,
                                diff::AdamState* adam = nullptr);

using IterateObserver =
    std::function<void(std::size_t step, const data::SkeletonSequence& iterate)>;

// Starts from X'_0 = X and runs `steps` updates; the observer sees every
// iterate X'_0 .. X'_M.
AttackResult run_attack(const models::SequenceRegressor& model,
                        const data::SkeletonSequence& original,
                        const AttackConfig& config,
                        const IterateObserver& observer = {});

// Config echo, traces, success flag and sequences in the dataset frame layout.
Json attack_result_to_json(const AttackResult& result, const AttackConfig& config,
                           const data::SkeletonSequence& original);

}  // namespace aia::attack
