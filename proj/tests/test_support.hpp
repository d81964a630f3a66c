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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <unistd.h>

#include "aia/data/skeleton.hpp"
#include "aia/diff/graph.hpp"
#include "aia/rng.hpp"

namespace aia::testing {

// Scalar function of one or more leaves, built fresh inside `graph`.
using ScalarFn = std::function<diff::Var(diff::Graph&, std::span<const diff::Var>)>;

// |analytic - numeric| / max(1, |analytic|, |numeric|): relative for large
// gradients, absolute below unit scale where central differences lose digits.
inline double gradient_error(double analytic, double numeric) {
  return std::abs(analytic - numeric) /
         std::max({1.0, std::abs(analytic), std::abs(numeric)});
}

// Worst gradient_error of backward() against central differences with step
// `h` over every element of every input.
inline double max_gradient_error(const ScalarFn& fn, const std::vector<diff::NdArray>& inputs,
                                 double h = 1e-5) {
  std::vector<diff::NdArray> analytic;
  {
    diff::Graph g;
    std::vector<diff::Var> leaves;
    for (const auto& x : inputs) leaves.push_back(g.leaf(x, true));
    g.backward(fn(g, leaves));
    for (const auto& v : leaves) analytic.push_back(g.grad(v));
  }
  auto evaluate = [&](const std::vector<diff::NdArray>& xs) {
    diff::Graph g;
    std::vector<diff::Var> leaves;
    for (const auto& x : xs) leaves.push_back(g.constant(x));
    return fn(g, leaves).value().item();
  };
  double worst = 0.0;
  std::vector<diff::NdArray> probe = inputs;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    for (std::size_t k = 0; k < inputs[i].size(); ++k) {
      const double x0 = inputs[i][k];
      probe[i][k] = x0 + h;
      const double up = evaluate(probe);
      probe[i][k] = x0 - h;
      const double down = evaluate(probe);
      probe[i][k] = x0;
      worst = std::max(worst, gradient_error(analytic[i][k], (up - down) / (2.0 * h)));
    }
  }
  return worst;
}

inline diff::NdArray random_array(diff::Shape shape, UnitRng& rng, double lo = -1.0,
                                  double hi = 1.0) {
  diff::NdArray a(std::move(shape));
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = rng.in(lo, hi);
  return a;
}

// Uniform values kept at least `gap` away from zero, for ops with a kink there.
inline diff::NdArray random_away_from_zero(diff::Shape shape, UnitRng& rng,
                                           double gap = 0.05) {
  diff::NdArray a(std::move(shape));
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double m = rng.in(gap, 1.0);
    a[i] = rng.next() < 0.5 ? -m : m;
  }
  return a;
}

// Brute-force distance from `point` to the sphere of radius `eta` around
// `center`: minimum over `samples` uniform sphere points (normalized
// Gaussians via Box-Muller).
inline double sampled_sphere_distance(std::span<const double> point,
                                      std::span<const double> center, double eta,
                                      std::size_t samples, UnitRng& rng) {
  const std::size_t dim = point.size();
  std::vector<double> dir(dim);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < samples; ++s) {
    double norm2 = 0.0;
    for (double& v : dir) {
      const double u1 = 1.0 - rng.next();
      const double u2 = rng.next();
      v = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
      norm2 += v * v;
    }
    const double scale = eta / std::sqrt(norm2);
    double d2 = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      const double diff = center[k] + scale * dir[k] - point[k];
      d2 += diff * diff;
    }
    best = std::min(best, std::sqrt(d2));
  }
  return best;
}

// max over t of the largest coordinate change of the perturbation between
// frames t-1 and t.
inline double max_perturbation_jump(const data::SkeletonSequence& adversarial,
                                    const data::SkeletonSequence& original) {
  double worst = 0.0;
  const auto a = adversarial.values();
  const auto x = original.values();
  const std::size_t dim = original.feature_dim();
  for (std::size_t i = dim; i < a.size(); ++i) {
    worst = std::max(worst, std::abs((a[i] - x[i]) - (a[i - dim] - x[i - dim])));
  }
  return worst;
}

// Directory under the system temp dir, removed with its contents on scope exit.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("aia-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace aia::testing
