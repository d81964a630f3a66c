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

#include <array>
#include <span>
#include <vector>

#include "aia/diff/graph.hpp"
#include "test_support.hpp"

namespace aia::testing {

using diff::Graph;
using diff::NdArray;
using diff::Var;

// Weights every output element differently so that no gradient entry is
// trivially symmetric.
inline Var weighted_sum(Var out, std::uint64_t seed) {
  UnitRng rng(seed);
  Graph& g = *out.graph;
  return sum(mul(out, g.constant(random_array(out.shape(), rng))));
}

struct OpCase {
  const char* name;
  ScalarFn fn;
  std::vector<NdArray> inputs;
};

inline std::vector<OpCase> op_cases() {
  UnitRng rng(2024);
  std::vector<OpCase> cases;
  auto one = [](auto op) {
    return [op](Graph&, std::span<const Var> v) { return weighted_sum(op(v[0]), 1); };
  };
  auto two = [](auto op) {
    return [op](Graph&, std::span<const Var> v) { return weighted_sum(op(v[0], v[1]), 2); };
  };
  cases.push_back({"add", two([](Var a, Var b) { return add(a, b); }),
                   {random_array({3, 4}, rng), random_array({3, 4}, rng)}});
  cases.push_back({"sub", two([](Var a, Var b) { return sub(a, b); }),
                   {random_array({3, 4}, rng), random_array({3, 4}, rng)}});
  cases.push_back({"mul", two([](Var a, Var b) { return mul(a, b); }),
                   {random_array({3, 4}, rng), random_array({3, 4}, rng)}});
  cases.push_back({"scale", one([](Var a) { return scale(a, -2.5); }), {random_array({5}, rng)}});
  cases.push_back(
      {"add_scalar", one([](Var a) { return add_scalar(a, 0.3); }), {random_array({2, 2}, rng)}});
  cases.push_back({"add_row", two([](Var a, Var r) { return add_row(a, r); }),
                   {random_array({4, 3}, rng), random_array({3}, rng)}});
  cases.push_back({"matmul", two([](Var a, Var b) { return matmul(a, b); }),
                   {random_array({3, 4}, rng), random_array({4, 2}, rng)}});
  cases.push_back({"concat_rows",
                   two([](Var a, Var b) {
                     const std::array<Var, 2> parts{a, b};
                     return concat_rows(parts);
                   }),
                   {random_array({2, 3}, rng), random_array({3, 3}, rng)}});
  cases.push_back({"slice_rows", one([](Var a) { return slice(a, 0, 1, 3); }),
                   {random_array({4, 3}, rng)}});
  cases.push_back({"slice_cols", one([](Var a) { return slice(a, 1, 1, 2); }),
                   {random_array({4, 3}, rng)}});
  cases.push_back({"relu", one([](Var a) { return relu(a); }),
                   {random_away_from_zero({3, 4}, rng)}});
  cases.push_back({"tanh", one([](Var a) { return tanh(a); }), {random_array({3, 4}, rng, -2, 2)}});
  cases.push_back(
      {"sigmoid", one([](Var a) { return sigmoid(a); }), {random_array({3, 4}, rng, -3, 3)}});
  cases.push_back({"abs", one([](Var a) { return abs(a); }), {random_away_from_zero({3, 4}, rng)}});
  for (std::size_t dilation : {1, 2, 3}) {
    cases.push_back({dilation == 1 ? "conv_d1" : dilation == 2 ? "conv_d2" : "conv_d3",
                     two([dilation](Var x, Var w) { return causal_conv1d(x, w, dilation); }),
                     {random_array({7, 2}, rng), random_array({3, 2, 3}, rng)}});
  }
  cases.push_back({"sum", [](Graph&, std::span<const Var> v) { return scale(sum(v[0]), 1.7); },
                   {random_array({3, 3}, rng)}});
  cases.push_back(
      {"l2_norm_rows", one([](Var a) { return l2_norm(a, 1); }), {random_array({4, 3}, rng)}});
  cases.push_back(
      {"l2_norm_cols", one([](Var a) { return l2_norm(a, 0); }), {random_array({4, 3}, rng)}});
  return cases;
}

}  // namespace aia::testing
