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

#include "aia/data/skeleton.hpp"
#include "aia/diff/graph.hpp"

namespace aia::attack {

// Sum over frames of the Euclidean distance between output and target frames,
// i.e. the quantity compared against the tolerance kappa.
double distance_sum(const data::SkeletonSequence& output,
                    const data::SkeletonSequence& target);
double distance_sum(const diff::NdArray& output, const diff::NdArray& target);

// Sum over frames of the distance from each output frame to the sphere of
// radius eta around the matching target frame: sum_t | ||o_t - y_t|| - eta |.
// output: [T, D] node, target: [T, D].
diff::Var spatial_loss(diff::Var output, const diff::NdArray& target, double eta);

// sum_t ||x_t - x_{t-1}|| + ||x_t - x_{t+1}|| with the terms that would need
// x_0 or x_{T+1} dropped. Needs T >= 2.
diff::Var temporal_loss(diff::Var sequence);

double spatial_loss_value(const data::SkeletonSequence& output,
                          const data::SkeletonSequence& target, double eta);
double temporal_loss_value(const data::SkeletonSequence& sequence);

}  // namespace aia::attack
