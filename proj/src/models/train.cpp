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

#include "aia/models/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "aia/diff/adam.hpp"
#include "aia/error.hpp"
#include "aia/rng.hpp"

namespace aia::models {

using diff::Graph;
using diff::NdArray;
using diff::Var;

void TrainConfig::validate() const {
  if (epochs < 1) throw Error(ErrorKind::kConfig, "train: epochs must be >= 1");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw Error(ErrorKind::kConfig, "train: learning rate must be positive");
  }
}

Var mse_loss(Var prediction, const NdArray& target) {
  if (prediction.shape() != target.shape()) {
    throw ShapeError("mse_loss: prediction " + diff::shape_string(prediction.shape()) +
                     " vs target " + diff::shape_string(target.shape()));
  }
  Graph& g = *prediction.graph;
  const Var diff = diff::sub(prediction, g.constant(target));
  return diff::scale(diff::sum(diff::mul(diff, diff)),
                     1.0 / static_cast<double>(target.size()));
}

double mean_mse(const SequenceRegressor& model,
                std::span<const data::SequencePair> pairs) {
  if (pairs.empty()) throw Error(ErrorKind::kInvalidArgument, "mean_mse: no pairs");
  double total = 0.0;
  for (const auto& pair : pairs) {
    Graph g;
    const Var out = model.forward(g, g.constant(pair.input.to_array()));
    total += mse_loss(out, pair.target.to_array()).value().item();
  }
  return total / static_cast<double>(pairs.size());
}

TrainResult train(SequenceRegressor& model, std::span<const data::SequencePair> pairs,
                  const TrainConfig& config, const EpochCallback& on_epoch) {
  config.validate();
  if (pairs.empty()) throw Error(ErrorKind::kInvalidArgument, "train: empty training set");
  for (const auto& pair : pairs) {
    model.check_input({pair.input.frames(), pair.input.feature_dim()});
    if (pair.target.frames() != pair.input.frames() ||
        pair.target.feature_dim() != pair.input.feature_dim()) {
      throw ShapeError("train: target shape differs from input shape");
    }
  }

  auto& params = model.parameters();
  std::vector<NdArray> values;
  std::vector<NdArray> grads;
  for (const auto& p : params) {
    values.push_back(p.value);
    grads.emplace_back(p.value.shape());
  }
  diff::AdamState adam;
  const diff::AdamOptions adam_options{.learning_rate = config.learning_rate};

  const std::size_t batch =
      config.batch_size == 0 ? pairs.size() : std::min(config.batch_size, pairs.size());
  std::vector<std::size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  UnitRng rng(config.seed);

  TrainResult result;
  result.loss_history.reserve(config.epochs);
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    if (batch < pairs.size()) {
      // Fisher-Yates with the portable generator.
      for (std::size_t i = order.size(); i > 1; --i) {
        std::swap(order[i - 1], order[rng.index(i)]);
      }
    }
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t end = std::min(order.size(), start + batch);
      for (NdArray& g : grads) g.fill(0.0);
      for (std::size_t i = start; i < end; ++i) {
        const auto& pair = pairs[order[i]];
        Graph graph;
        const auto bound = model.bind_parameters(graph, true);
        const Var out = model.forward(graph, graph.constant(pair.input.to_array()), bound);
        const Var loss = mse_loss(out, pair.target.to_array());
        const double value = loss.value().item();
        if (!std::isfinite(value)) {
          throw Error(ErrorKind::kNumeric, "train: non-finite loss at epoch " +
                                               std::to_string(epoch + 1));
        }
        epoch_loss += value;
        graph.backward(loss);
        for (std::size_t k = 0; k < bound.size(); ++k) {
          const NdArray& gk = graph.grad(bound[k]);
          NdArray& acc = grads[k];
          for (std::size_t e = 0; e < acc.size(); ++e) acc[e] += gk[e];
        }
      }
      const double inv = 1.0 / static_cast<double>(end - start);
      for (NdArray& g : grads) {
        for (double& v : g.data()) v *= inv;
      }
      diff::adam_update(values, grads, adam, adam_options);
      for (std::size_t k = 0; k < params.size(); ++k) params[k].value = values[k];
    }
    epoch_loss /= static_cast<double>(pairs.size());
    result.loss_history.push_back(epoch_loss);
    if (on_epoch) on_epoch(epoch, epoch_loss);
  }
  result.final_loss = mean_mse(model, pairs);
  if (!std::isfinite(result.final_loss)) {
    throw Error(ErrorKind::kNumeric, "train: non-finite loss after final epoch");
  }
  return result;
}

}  // namespace aia::models
