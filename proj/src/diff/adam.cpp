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

#include "aia/diff/adam.hpp"

#include <cmath>

#include "aia/error.hpp"

namespace aia::diff {

void adam_update(std::span<NdArray> params, std::span<const NdArray> grads,
                 AdamState& state, const AdamOptions& options) {
  if (params.size() != grads.size()) {
    throw ShapeError("adam_update: " + std::to_string(params.size()) +
                     " parameters but " + std::to_string(grads.size()) +
                     " gradients");
  }
  if (state.first_moment.empty() && state.step == 0) {
    for (const NdArray& p : params) {
      state.first_moment.emplace_back(p.shape());
      state.second_moment.emplace_back(p.shape());
    }
  }
  if (state.first_moment.size() != params.size() ||
      state.second_moment.size() != params.size()) {
    throw ShapeError("adam_update: optimizer state tracks " +
                     std::to_string(state.first_moment.size()) +
                     " arrays, got " + std::to_string(params.size()));
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (params[i].shape() != grads[i].shape() ||
        params[i].shape() != state.first_moment[i].shape()) {
      throw ShapeError("adam_update: parameter " + std::to_string(i) +
                       " has shape " + shape_string(params[i].shape()) +
                       ", gradient " + shape_string(grads[i].shape()) +
                       ", state " + shape_string(state.first_moment[i].shape()));
    }
  }

  ++state.step;
  const double t = static_cast<double>(state.step);
  const double bias1 = 1.0 - std::pow(options.beta1, t);
  const double bias2 = 1.0 - std::pow(options.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    NdArray& p = params[i];
    const NdArray& g = grads[i];
    NdArray& m = state.first_moment[i];
    NdArray& v = state.second_moment[i];
    for (std::size_t j = 0; j < p.size(); ++j) {
      m[j] = options.beta1 * m[j] + (1.0 - options.beta1) * g[j];
      v[j] = options.beta2 * v[j] + (1.0 - options.beta2) * g[j] * g[j];
      const double m_hat = m[j] / bias1;
      const double v_hat = v[j] / bias2;
      p[j] -= options.learning_rate * m_hat / (std::sqrt(v_hat) + options.epsilon);
    }
  }
}

}  // namespace aia::diff
