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

#include <cstdint>
#include <span>
#include <vector>

#include "aia/diff/ndarray.hpp"

namespace aia::diff {

struct AdamOptions {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// First/second moment estimates, one pair per parameter array.
struct AdamState {
  std::vector<NdArray> first_moment;
  std::vector<NdArray> second_moment;
  std::int64_t step = 0;
};

// One bias-corrected Adam step. State moments are created on first use.
void adam_update(std::span<NdArray> params, std::span<const NdArray> grads,
                 AdamState& state, const AdamOptions& options = {});

}  // namespace aia::diff
