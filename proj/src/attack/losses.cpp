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

#include "aia/attack/losses.hpp"

#include <cmath>

#include "aia/error.hpp"

namespace aia::attack {

using diff::Graph;
using diff::NdArray;
using diff::Var;

double distance_sum(const NdArray& output, const NdArray& target) {
  if (output.shape() != target.shape() || output.rank() != 2) {
    throw ShapeError("distance_sum: output " + diff::shape_string(output.shape()) +
                     " vs target " + diff::shape_string(target.shape()));
  }
  const std::size_t frames = output.dim(0);
  const std::size_t dim = output.dim(1);
  double total = 0.0;
  for (std::size_t t = 0; t < frames; ++t) {
    double acc = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      const double d = output[t * dim + i] - target[t * dim + i];
      acc += d * d;
    }
    total += std::sqrt(acc);
  }
  return total;
}

double distance_sum(const data::SkeletonSequence& output,
                    const data::SkeletonSequence& target) {
  return distance_sum(output.to_array(), target.to_array());
}

Var spatial_loss(Var output, const NdArray& target, double eta) {
  if (output.shape() != target.shape() || target.rank() != 2) {
    throw ShapeError("spatial_loss: output " + diff::shape_string(output.shape()) +
                     " vs target " + diff::shape_string(target.shape()));
  }
  if (!(eta >= 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "spatial_loss: eta must be >= 0");
  }
  Graph& g = *output.graph;
  const Var distances = diff::l2_norm(diff::sub(output, g.constant(target)), 1);
  return diff::sum(diff::abs(diff::add_scalar(distances, -eta)));
}

Var temporal_loss(Var sequence) {
  const auto& shape = sequence.shape();
  if (shape.size() != 2 || shape[0] < 2) {
    throw ShapeError("temporal_loss: needs [T, D] with T >= 2, got " +
                     diff::shape_string(shape));
  }
  const std::size_t frames = shape[0];
  const Var later = diff::slice(sequence, 0, 1, frames);
  const Var earlier = diff::slice(sequence, 0, 0, frames - 1);
  // Each interior adjacency appears once as a backward and once as a forward
  // term, so the sum is twice the total frame-to-frame path length.
  return diff::scale(diff::sum(diff::l2_norm(diff::sub(later, earlier), 1)), 2.0);
}

double spatial_loss_value(const data::SkeletonSequence& output,
                          const data::SkeletonSequence& target, double eta) {
  Graph g;
  return spatial_loss(g.constant(output.to_array()), target.to_array(), eta)
      .value()
      .item();
}

double temporal_loss_value(const data::SkeletonSequence& sequence) {
  Graph g;
  return temporal_loss(g.constant(sequence.to_array())).value().item();
}

}  // namespace aia::attack
