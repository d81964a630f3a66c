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
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "aia/attack/aia.hpp"
#include "aia/data/skeleton.hpp"
#include "aia/eval/tolerance.hpp"
#include "aia/models/regressor.hpp"

namespace aia::eval {

using Json = nlohmann::ordered_json;

inline const std::vector<double> kDefaultEpsilonGrid = {0.075, 0.15, 0.225,
                                                        0.3,   0.375, 0.45};

// Turn every input into this reaction: target sequence plus tolerance.
struct Objective {
  std::string label;
  data::SkeletonSequence target;
  double kappa = 0.0;
};

// One objective per category. The target is the reactor sequence of a seeded
// pick among `preferred` records of that category, falling back to
// `fallback` when `preferred` has none. kappa comes from `table`.
std::vector<Objective> build_objectives(std::span<const data::InteractionRecord> preferred,
                                        std::span<const data::InteractionRecord> fallback,
                                        const ToleranceTable& table, std::uint64_t seed);

// Natural-output distance sums of every input to the objective target.
std::vector<double> natural_distances(const models::SequenceRegressor& model,
                                      std::span<const data::SkeletonSequence> inputs,
                                      const Objective& objective);

// Replaces each objective's kappa with the q-th percentile of its natural
// distances over `inputs`.
void assign_percentile_kappas(const models::SequenceRegressor& model,
                              std::span<const data::SkeletonSequence> inputs,
                              std::vector<Objective>& objectives, double q);

// Per-cell outcome table indexed [objective][epsilon][sample].
template <typename T>
using CellGrid = std::vector<std::vector<std::vector<T>>>;

struct SuccessReport {
  std::string model_id;
  std::vector<std::string> objectives;
  std::vector<double> kappas;
  std::vector<double> epsilons;
  std::size_t samples = 0;
  CellGrid<std::uint8_t> flags;
  CellGrid<double> distance_sums;
  // Kept so the same sequences can be replayed against another model.
  CellGrid<data::SkeletonSequence> adversarial;

  std::size_t successes(std::size_t objective, std::size_t epsilon) const;
  double rate(std::size_t objective, std::size_t epsilon) const;
  // Mean of the per-objective rates.
  double overall_rate(std::size_t epsilon) const;
};

struct SweepOptions {
  std::vector<double> epsilons = kDefaultEpsilonGrid;
  // Everything except epsilon, kappa and target, which vary per cell.
  attack::AttackConfig base;
  std::size_t threads = 1;
};

// run_attack for every (objective, epsilon, sample); targets are fitted to
// each input's length.
SuccessReport whitebox_sweep(const models::SequenceRegressor& model,
                             const std::string& model_id,
                             std::span<const data::SkeletonSequence> inputs,
                             std::span<const Objective> objectives,
                             const SweepOptions& options);

struct TransferEntry {
  std::string source;
  std::string receiver;
  std::vector<std::string> objectives;
  std::vector<double> epsilons;
  std::size_t samples = 0;
  CellGrid<std::uint8_t> flags;

  double rate(std::size_t objective, std::size_t epsilon) const;
  double overall_rate(std::size_t epsilon) const;
};

using TransferMatrix = std::vector<TransferEntry>;

// Replays the source report's adversarial sequences through `receiver` and
// judges them with the same kappa.
TransferEntry blackbox_transfer(const SuccessReport& source,
                                const models::SequenceRegressor& receiver,
                                const std::string& receiver_id,
                                std::span<const Objective> objectives,
                                std::size_t threads = 1);

std::string report_csv(const SuccessReport& report);
std::string transfer_csv(const TransferMatrix& matrix);
Json report_summary(const SuccessReport& report);
Json transfer_summary(const TransferMatrix& matrix);

// Full report including adversarial sequences, for later transfer runs.
Json report_to_json(const SuccessReport& report);
SuccessReport report_from_json(const Json& doc);

Json objectives_to_json(std::span<const Objective> objectives);
std::vector<Objective> objectives_from_json(const Json& doc);

}  // namespace aia::eval
