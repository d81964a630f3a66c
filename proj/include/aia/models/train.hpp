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
#include <span>
#include <vector>

#include "aia/data/skeleton.hpp"
#include "aia/diff/graph.hpp"
#include "aia/models/regressor.hpp"

namespace aia::models {

struct TrainConfig {
  std::size_t epochs = 1000;
  double learning_rate = 1e-3;
  // 0 means full batch.
  std::size_t batch_size = 0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct TrainResult {
  // Mean per-frame MSE over the epoch, measured before that epoch's updates.
  std::vector<double> loss_history;
  double final_loss = 0.0;
};

using EpochCallback = std::function<void(std::size_t epoch, double loss)>;

// Mean of squared differences over all T x 3N entries.
diff::Var mse_loss(diff::Var prediction, const diff::NdArray& target);

double mean_mse(const SequenceRegressor& model,
                std::span<const data::SequencePair> pairs);

// Adam on the mean per-frame MSE. Throws a numeric error naming the epoch if
// the loss stops being finite.
TrainResult train(SequenceRegressor& model, std::span<const data::SequencePair> pairs,
                  const TrainConfig& config, const EpochCallback& on_epoch = {});

}  // namespace aia::models
