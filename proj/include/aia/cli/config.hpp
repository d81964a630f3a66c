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
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "aia/attack/aia.hpp"
#include "aia/models/regressor.hpp"
#include "aia/models/train.hpp"

namespace aia::cli {

using Json = nlohmann::ordered_json;

enum class KappaMode {
  // Per-label tolerance from the survey table (plus overrides).
  kSurvey,
  // A percentile of the natural-output distance sums over the attack inputs.
  kPercentile,
};

struct DataSection {
  std::size_t per_category = 5;
  std::size_t frames = 16;
  std::size_t joints = 15;
  std::set<std::string> held_out = {"s01s02", "s03s04", "s05s02", "s06s04"};
};

struct ModelSection {
  models::Architecture architecture = models::Architecture::kTcn;
  // "tiny" or "full".
  std::string preset = "tiny";

  models::ModelConfig model_config(std::size_t joints) const;
};

struct AttackSection {
  double epsilon = 0.45;
  double alpha = 0.03;
  std::size_t steps = 400;
  double lambda = 0.1;
  // "depth" or "all".
  std::string mask = "depth";
  attack::UpdateRule update_rule = attack::UpdateRule::kSignPgd;
  double adam_learning_rate = 1e-3;
  bool clamp_to_domain = true;
  bool keep_best = true;

  // Everything but kappa and target.
  attack::AttackConfig attack_config(std::size_t joints) const;
};

struct EvalSection {
  std::vector<double> epsilons = {0.075, 0.15, 0.225, 0.3, 0.375, 0.45};
  KappaMode kappa_mode = KappaMode::kSurvey;
  double kappa_percentile = 25.0;
  // Added to (or replacing) the survey table entries.
  std::map<std::string, double> tolerances;
  // Restrict evaluation to one objective label.
  std::optional<std::string> objective;
  std::size_t threads = 1;
};

// One seed drives synthesis, weight initialization, batch shuffling and
// target selection.
struct RunConfig {
  std::uint64_t seed = 0;
  DataSection data;
  ModelSection model;
  models::TrainConfig train;
  AttackSection attack;
  EvalSection eval;

  // Throws a config error naming the offending key.
  void validate() const;
};

// Defaults overlaid with `doc`. Unknown keys and wrongly typed values are
// config errors.
RunConfig config_from_json(const Json& doc);
Json config_to_json(const RunConfig& config);

// An empty file yields the defaults.
RunConfig load_config(const std::filesystem::path& path);

}  // namespace aia::cli
