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
#include <functional>
#include <span>
#include <vector>

#include "aia/diff/ndarray.hpp"

namespace aia::diff {

enum class OpKind {
  kLeaf,
  kAdd,
  kSubtract,
  kScale,
  kAddScalar,
  kAddRow,
  kMultiply,
  kMatmul,
  kConcatRows,
  kSlice,
  kRelu,
  kTanh,
  kSigmoid,
  kCausalConv1d,
  kSum,
  kL2Norm,
  kAbs,
};

const char* to_string(OpKind kind);

class Graph;

// Lightweight handle to a node inside a Graph. Copyable; does not own.
struct Var {
  Graph* graph = nullptr;
  std::size_t id = 0;

  const NdArray& value() const;
  const Shape& shape() const { return value().shape(); }
};

// Tape of computation nodes. Nodes are appended in creation order, which is a
// valid topological order, so backward simply walks the tape in reverse.
class Graph {
 public:
  Graph() = default;
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  Var leaf(NdArray value, bool requires_grad = false);
  Var constant(NdArray value) { return leaf(std::move(value), false); }

  const NdArray& value(Var v) const { return nodes_.at(v.id).value; }
  const NdArray& grad(Var v) const;
  OpKind kind(Var v) const { return nodes_.at(v.id).kind; }
  bool requires_grad(Var v) const { return nodes_.at(v.id).requires_grad; }
  std::size_t size() const noexcept { return nodes_.size(); }

  // Accumulates d(root)/d(node) into every node that requires a gradient.
  // Calling it twice without zero_grad() sums the two passes.
  void backward(Var root);
  void zero_grad();

 private:
  using BackwardFn = std::function<void(Graph&, std::size_t)>;

  struct Node {
    OpKind kind = OpKind::kLeaf;
    std::vector<std::size_t> inputs;
    NdArray value;
    NdArray grad;
    bool requires_grad = false;
    bool grad_ready = false;
    BackwardFn backward;
  };

  Var push(OpKind kind, std::vector<std::size_t> inputs, NdArray value,
           BackwardFn backward);
  NdArray& grad_slot(std::size_t id);
  const NdArray& node_value(std::size_t id) const { return nodes_[id].value; }
  bool needs_grad(std::size_t id) const { return nodes_[id].requires_grad; }

  std::vector<Node> nodes_;

  friend Var add(Var, Var);
  friend Var sub(Var, Var);
  friend Var scale(Var, double);
  friend Var add_scalar(Var, double);
  friend Var add_row(Var, Var);
  friend Var mul(Var, Var);
  friend Var matmul(Var, Var);
  friend Var concat_rows(std::span<const Var>);
  friend Var slice(Var, std::size_t, std::size_t, std::size_t);
  friend Var relu(Var);
  friend Var tanh(Var);
  friend Var sigmoid(Var);
  friend Var causal_conv1d(Var, Var, std::size_t);
  friend Var sum(Var);
  friend Var l2_norm(Var, std::size_t);
  friend Var abs(Var);
};

// Element-wise on equal shapes.
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);
Var scale(Var a, double factor);
Var add_scalar(Var a, double offset);

// a: [R, C]; row: [C] or [1, C], added to every row of a.
Var add_row(Var a, Var row);

// [m, k] x [k, n] -> [m, n].
Var matmul(Var a, Var b);

// Stacks along axis 0; trailing extents must agree.
Var concat_rows(std::span<const Var> parts);

// Half-open [begin, end) along `axis`.
Var slice(Var a, std::size_t axis, std::size_t begin, std::size_t end);

Var relu(Var a);
Var tanh(Var a);
Var sigmoid(Var a);
Var abs(Var a);

// x: [T, Cin], weight: [K, Cin, Cout] -> [T, Cout]. Output t reads inputs
// t - (K-1-k)*dilation for k in [0, K); indices before 0 read zero.
Var causal_conv1d(Var x, Var weight, std::size_t dilation);

// Sum of all elements -> scalar.
Var sum(Var a);

// Euclidean norm over `axis`, which is removed from the shape. The gradient at
// a zero-norm slice is taken as zero.
Var l2_norm(Var a, std::size_t axis);

}  // namespace aia::diff
