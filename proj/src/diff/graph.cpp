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

#include "aia/diff/graph.hpp"

#include <algorithm>
#include <cmath>

#include "aia/error.hpp"

namespace aia::diff {

namespace {

[[noreturn]] void shape_fail(const char* op, const std::string& detail) {
  throw ShapeError(std::string(op) + ": " + detail);
}

void require_same_graph(const char* op, Var a, Var b) {
  if (a.graph == nullptr || a.graph != b.graph) {
    throw Error(ErrorKind::kInvalidArgument,
                std::string(op) + ": operands belong to different graphs");
  }
}

void require_same_shape(const char* op, const NdArray& a, const NdArray& b) {
  if (a.shape() != b.shape()) {
    shape_fail(op, "operand shapes differ: " + shape_string(a.shape()) +
                       " vs " + shape_string(b.shape()));
  }
}

void require_rank(const char* op, const NdArray& a, std::size_t rank) {
  if (a.rank() != rank) {
    shape_fail(op, "expected rank " + std::to_string(rank) + ", got shape " +
                       shape_string(a.shape()));
  }
}

// Splits a shape around `axis` into (outer, extent, inner) strides.
struct AxisSplit {
  std::size_t outer = 1;
  std::size_t extent = 1;
  std::size_t inner = 1;
};

AxisSplit split_axis(const Shape& shape, std::size_t axis) {
  AxisSplit s;
  for (std::size_t i = 0; i < axis; ++i) s.outer *= shape[i];
  s.extent = shape[axis];
  for (std::size_t i = axis + 1; i < shape.size(); ++i) s.inner *= shape[i];
  return s;
}

template <typename F>
NdArray map(const NdArray& a, F f) {
  NdArray out(a.shape());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = f(a[i]);
  return out;
}

}  // namespace

const char* to_string(OpKind kind) {
  switch (kind) {
    case OpKind::kLeaf: return "leaf";
    case OpKind::kAdd: return "add";
    case OpKind::kSubtract: return "subtract";
    case OpKind::kScale: return "scale";
    case OpKind::kAddScalar: return "add_scalar";
    case OpKind::kAddRow: return "add_row";
    case OpKind::kMultiply: return "multiply";
    case OpKind::kMatmul: return "matmul";
    case OpKind::kConcatRows: return "concat_rows";
    case OpKind::kSlice: return "slice";
    case OpKind::kRelu: return "relu";
    case OpKind::kTanh: return "tanh";
    case OpKind::kSigmoid: return "sigmoid";
    case OpKind::kCausalConv1d: return "causal_conv1d";
    case OpKind::kSum: return "sum";
    case OpKind::kL2Norm: return "l2_norm";
    case OpKind::kAbs: return "abs";
  }
  return "unknown";
}

const NdArray& Var::value() const { return graph->value(*this); }

Var Graph::leaf(NdArray value, bool requires_grad) {
  Node node;
  node.kind = OpKind::kLeaf;
  node.value = std::move(value);
  node.requires_grad = requires_grad;
  nodes_.push_back(std::move(node));
  return Var{this, nodes_.size() - 1};
}

Var Graph::push(OpKind kind, std::vector<std::size_t> inputs, NdArray value,
                BackwardFn backward) {
  Node node;
  node.kind = kind;
  node.requires_grad = std::any_of(inputs.begin(), inputs.end(),
                                   [&](std::size_t i) { return nodes_[i].requires_grad; });
  node.inputs = std::move(inputs);
  node.value = std::move(value);
  if (node.requires_grad) node.backward = std::move(backward);
  nodes_.push_back(std::move(node));
  return Var{this, nodes_.size() - 1};
}

NdArray& Graph::grad_slot(std::size_t id) {
  Node& n = nodes_[id];
  if (!n.grad_ready) {
    n.grad = NdArray(n.value.shape());
    n.grad_ready = true;
  }
  return n.grad;
}

const NdArray& Graph::grad(Var v) const {
  const Node& n = nodes_.at(v.id);
  if (!n.requires_grad) {
    throw Error(ErrorKind::kInvalidArgument,
                std::string("grad: node ") + std::to_string(v.id) + " (" +
                    to_string(n.kind) + ") does not require a gradient");
  }
  if (!n.grad_ready) {
    throw Error(ErrorKind::kInvalidArgument,
                "grad: backward has not reached node " + std::to_string(v.id));
  }
  return n.grad;
}

void Graph::backward(Var root) {
  if (root.graph != this || root.id >= nodes_.size()) {
    throw Error(ErrorKind::kInvalidArgument, "backward: root not in graph");
  }
  const NdArray& rv = nodes_[root.id].value;
  if (rv.size() != 1) {
    throw ShapeError("backward: root must be scalar, got shape " +
                     shape_string(rv.shape()));
  }
  // Interior slots restart from zero so that only leaves accumulate
  // across passes.
  for (std::size_t i = 0; i <= root.id; ++i) {
    if (!nodes_[i].requires_grad) continue;
    NdArray& slot = grad_slot(i);
    if (nodes_[i].backward) slot.fill(0.0);
  }
  if (!nodes_[root.id].requires_grad) return;
  grad_slot(root.id)[0] += 1.0;
  for (std::size_t i = root.id + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (n.requires_grad && n.backward) n.backward(*this, i);
  }
}

void Graph::zero_grad() {
  for (Node& n : nodes_) {
    if (n.grad_ready) n.grad.fill(0.0);
  }
}

Var add(Var a, Var b) {
  require_same_graph("add", a, b);
  Graph& g = *a.graph;
  const NdArray& av = g.node_value(a.id);
  const NdArray& bv = g.node_value(b.id);
  require_same_shape("add", av, bv);
  NdArray out(av.shape());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = av[i] + bv[i];
  return g.push(OpKind::kAdd, {a.id, b.id}, std::move(out),
                [ia = a.id, ib = b.id](Graph& g, std::size_t self) {
                  const NdArray& up = g.nodes_[self].grad;
                  for (std::size_t in : {ia, ib}) {
                    if (!g.needs_grad(in)) continue;
                    NdArray& d = g.grad_slot(in);
                    for (std::size_t i = 0; i < up.size(); ++i) d[i] += up[i];
                  }
                });
}

Var sub(Var a, Var b) {
  require_same_graph("subtract", a, b);
  Graph& g = *a.graph;
  const NdArray& av = g.node_value(a.id);
  const NdArray& bv = g.node_value(b.id);
  require_same_shape("subtract", av, bv);
  NdArray out(av.shape());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = av[i] - bv[i];
  return g.push(OpKind::kSubtract, {a.id, b.id}, std::move(out),
                [ia = a.id, ib = b.id](Graph& g, std::size_t self) {
                  const NdArray& up = g.nodes_[self].grad;
                  if (g.needs_grad(ia)) {
                    NdArray& d = g.grad_slot(ia);
                    for (std::size_t i = 0; i < up.size(); ++i) d[i] += up[i];
                  }
                  if (g.needs_grad(ib)) {
                    NdArray& d = g.grad_slot(ib);
                    for (std::size_t i = 0; i < up.size(); ++i) d[i] -= up[i];
                  }
                });
}

Var mul(Var a, Var b) {
  require_same_graph("multiply", a, b);
  Graph& g = *a.graph;
  const NdArray& av = g.node_value(a.id);
  const NdArray& bv = g.node_value(b.id);
  require_same_shape("multiply", av, bv);
  NdArray out(av.shape());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = av[i] * bv[i];
  return g.push(OpKind::kMultiply, {a.id, b.id}, std::move(out),
                [ia = a.id, ib = b.id](Graph& g, std::size_t self) {
                  const NdArray& up = g.nodes_[self].grad;
                  if (g.needs_grad(ia)) {
                    const NdArray& other = g.node_value(ib);
                    NdArray& d = g.grad_slot(ia);
                    for (std::size_t i = 0; i < up.size(); ++i) d[i] += up[i] * other[i];
                  }
                  if (g.needs_grad(ib)) {
                    const NdArray& other = g.node_value(ia);
                    NdArray& d = g.grad_slot(ib);
                    for (std::size_t i = 0; i < up.size(); ++i) d[i] += up[i] * other[i];
                  }
                });
}

Var scale(Var a, double factor) {
  Graph& g = *a.graph;
  NdArray out = map(g.node_value(a.id), [factor](double v) { return v * factor; });
  return g.push(OpKind::kScale, {a.id}, std::move(out),
                [ia = a.id, factor](Graph& g, std::size_t self) {
                  const NdArray& up = g.nodes_[self].grad;
                  NdArray& d = g.grad_slot(ia);
                  for (std::size_t i = 0; i < up.size(); ++i) d[i] += factor * up[i];
                });
}

Var add_scalar(Var a, double offset) {
  Graph& g = *a.graph;
  NdArray out = map(g.node_value(a.id), [offset](double v) { return v + offset; });
  return g.push(OpKind::kAddScalar, {a.id}, std::move(out),
                [ia = a.id](Graph& g, std::size_t self) {
                  const NdArray& up = g.nodes_[self].grad;
                  NdArray& d = g.grad_slot(ia);
                  for (std::size_t i = 0; i < up.size(); ++i) d[i] += up[i];
                });
}

Var add_row(Var a, Var row) {
  require_same_graph("add_row", a, row);
  Graph& g = *a.graph;
  const NdArray& av = g.node_value(a.id);
  const NdArray& rv = g.node_value(row.id);
  require_rank("add_row", av, 2);
  const std::size_t rows = av.dim(0);
  const std::size_t cols = av.dim(1);
  if (rv.size() != cols || rv.rank() > 2 || (rv.rank() == 2 && rv.dim(0) != 1)) {
    shape_fail("add_row", "row of shape " + shape_string(rv.shape()) +
                              " does not match matrix " + shape_string(av.shape()));
  }
  NdArray out(av.shape());
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) out[r * cols + c] = av[r * cols + c] + rv[c];
  }
  return g.push(OpKind::kAddRow, {a.id, row.id}, std::move(out),
                [ia = a.id, ir = row.id, rows, cols](Graph& g, std::size_t self) {
                  const NdArray& up = g.nodes_[self].grad;
                  if (g.needs_grad(ia)) {
                    NdArray& d = g.grad_slot(ia);
                    for (std::size_t i = 0; i < up.size(); ++i) d[i] += up[i];
                  }
                  if (g.needs_grad(ir)) {
                    NdArray& d = g.grad_slot(ir);
                    for (std::size_t r = 0; r < rows; ++r) {
                      for (std::size_t c = 0; c < cols; ++c) d[c] += up[r * cols + c];
                    }
                  }
                });
}

Var matmul(Var a, Var b) {
  require_same_graph("matmul", a, b);
  Graph& g = *a.graph;
  const NdArray& av = g.node_value(a.id);
  const NdArray& bv = g.node_value(b.id);
  require_rank("matmul", av, 2);
  require_rank("matmul", bv, 2);
  if (av.dim(1) != bv.dim(0)) {
    shape_fail("matmul", "inner extents differ: " + shape_string(av.shape()) +
                             " x " + shape_string(bv.shape()));
  }
  const std::size_t m = av.dim(0), k = av.dim(1), n = bv.dim(1);
  NdArray out({m, n});
  for (std::size_t i = 0; i < m; ++i) {
    double* orow = &out[i * n];
    for (std::size_t p = 0; p < k; ++p) {
      const double s = av[i * k + p];
      if (s == 0.0) continue;
      const double* brow = &bv[p * n];
      for (std::size_t j = 0; j < n; ++j) orow[j] += s * brow[j];
    }
  }
  return g.push(
      OpKind::kMatmul, {a.id, b.id}, std::move(out),
      [ia = a.id, ib = b.id, m, k, n](Graph& g, std::size_t self) {
        const NdArray& up = g.nodes_[self].grad;
        if (g.needs_grad(ia)) {
          const NdArray& bv = g.node_value(ib);
          NdArray& d = g.grad_slot(ia);
          for (std::size_t i = 0; i < m; ++i) {
            const double* urow = &up[i * n];
            for (std::size_t p = 0; p < k; ++p) {
              const double* brow = &bv[p * n];
              double acc = 0.0;
              for (std::size_t j = 0; j < n; ++j) acc += urow[j] * brow[j];
              d[i * k + p] += acc;
            }
          }
        }
        if (g.needs_grad(ib)) {
          const NdArray& av = g.node_value(ia);
          NdArray& d = g.grad_slot(ib);
          for (std::size_t i = 0; i < m; ++i) {
            const double* urow = &up[i * n];
            for (std::size_t p = 0; p < k; ++p) {
              const double s = av[i * k + p];
              if (s == 0.0) continue;
              double* drow = &d[p * n];
              for (std::size_t j = 0; j < n; ++j) drow[j] += s * urow[j];
            }
          }
        }
      });
}

Var concat_rows(std::span<const Var> parts) {
  if (parts.empty()) shape_fail("concat_rows", "no operands");
  Graph& g = *parts[0].graph;
  const Shape& first = g.node_value(parts[0].id).shape();
  if (first.empty()) shape_fail("concat_rows", "scalar operand");
  Shape out_shape = first;
  out_shape[0] = 0;
  std::vector<std::size_t> ids;
  ids.reserve(parts.size());
  for (const Var& p : parts) {
    require_same_graph("concat_rows", parts[0], p);
    const Shape& s = g.node_value(p.id).shape();
    if (s.size() != first.size() ||
        !std::equal(s.begin() + 1, s.end(), first.begin() + 1)) {
      shape_fail("concat_rows", "trailing extents differ: " + shape_string(first) +
                                    " vs " + shape_string(s));
    }
    out_shape[0] += s[0];
    ids.push_back(p.id);
  }
  NdArray out(out_shape);
  std::size_t offset = 0;
  for (std::size_t id : ids) {
    const NdArray& v = g.node_value(id);
    std::copy(v.data().begin(), v.data().end(), out.data().begin() + offset);
    offset += v.size();
  }
  return g.push(OpKind::kConcatRows, ids, std::move(out),
                [ids](Graph& g, std::size_t self) {
                  const NdArray& up = g.nodes_[self].grad;
                  std::size_t offset = 0;
                  for (std::size_t id : ids) {
                    const std::size_t len = g.node_value(id).size();
                    if (g.needs_grad(id)) {
                      NdArray& d = g.grad_slot(id);
                      for (std::size_t i = 0; i < len; ++i) d[i] += up[offset + i];
                    }
                    offset += len;
                  }
                });
}

Var slice(Var a, std::size_t axis, std::size_t begin, std::size_t end) {
  Graph& g = *a.graph;
  const NdArray& av = g.node_value(a.id);
  if (axis >= av.rank() || begin >= end || end > av.dim(axis)) {
    shape_fail("slice", "range [" + std::to_string(begin) + "," +
                            std::to_string(end) + ") on axis " +
                            std::to_string(axis) + " invalid for shape " +
                            shape_string(av.shape()));
  }
  const AxisSplit s = split_axis(av.shape(), axis);
  const std::size_t len = end - begin;
  Shape out_shape = av.shape();
  out_shape[axis] = len;
  NdArray out(out_shape);
  for (std::size_t o = 0; o < s.outer; ++o) {
    const double* src = &av[(o * s.extent + begin) * s.inner];
    std::copy(src, src + len * s.inner, &out[o * len * s.inner]);
  }
  return g.push(OpKind::kSlice, {a.id}, std::move(out),
                [ia = a.id, s, begin, len](Graph& g, std::size_t self) {
                  const NdArray& up = g.nodes_[self].grad;
                  NdArray& d = g.grad_slot(ia);
                  for (std::size_t o = 0; o < s.outer; ++o) {
                    double* dst = &d[(o * s.extent + begin) * s.inner];
                    const double* src = &up[o * len * s.inner];
                    for (std::size_t i = 0; i < len * s.inner; ++i) dst[i] += src[i];
                  }
                });
}

Var relu(Var a) {
  Graph& g = *a.graph;
  NdArray out = map(g.node_value(a.id), [](double v) { return v > 0.0 ? v : 0.0; });
  return g.push(OpKind::kRelu, {a.id}, std::move(out),
                [ia = a.id](Graph& g, std::size_t self) {
                  const NdArray& up = g.nodes_[self].grad;
                  const NdArray& x = g.node_value(ia);
                  NdArray& d = g.grad_slot(ia);
                  for (std::size_t i = 0; i < up.size(); ++i) {
                    if (x[i] > 0.0) d[i] += up[i];
                  }
                });
}

Var tanh(Var a) {
  Graph& g = *a.graph;
  NdArray out = map(g.node_value(a.id), [](double v) { return std::tanh(v); });
  return g.push(OpKind::kTanh, {a.id}, std::move(out),
                [ia = a.id](Graph& g, std::size_t self) {
                  const NdArray& up = g.nodes_[self].grad;
                  const NdArray& y = g.nodes_[self].value;
                  NdArray& d = g.grad_slot(ia);
                  for (std::size_t i = 0; i < up.size(); ++i) {
                    d[i] += up[i] * (1.0 - y[i] * y[i]);
                  }
                });
}

Var sigmoid(Var a) {
  Graph& g = *a.graph;
  NdArray out = map(g.node_value(a.id), [](double v) {
    // Branches keep exp() from overflowing for large |v|.
    if (v >= 0.0) return 1.0 / (1.0 + std::exp(-v));
    const double e = std::exp(v);
    return e / (1.0 + e);
  });
  return g.push(OpKind::kSigmoid, {a.id}, std::move(out),
                [ia = a.id](Graph& g, std::size_t self) {
                  const NdArray& up = g.nodes_[self].grad;
                  const NdArray& y = g.nodes_[self].value;
                  NdArray& d = g.grad_slot(ia);
                  for (std::size_t i = 0; i < up.size(); ++i) {
                    d[i] += up[i] * y[i] * (1.0 - y[i]);
                  }
                });
}

Var abs(Var a) {
  Graph& g = *a.graph;
  NdArray out = map(g.node_value(a.id), [](double v) { return std::fabs(v); });
  return g.push(OpKind::kAbs, {a.id}, std::move(out),
                [ia = a.id](Graph& g, std::size_t self) {
                  const NdArray& up = g.nodes_[self].grad;
                  const NdArray& x = g.node_value(ia);
                  NdArray& d = g.grad_slot(ia);
                  for (std::size_t i = 0; i < up.size(); ++i) {
                    if (x[i] > 0.0) {
                      d[i] += up[i];
                    } else if (x[i] < 0.0) {
                      d[i] -= up[i];
                    }
                  }
                });
}

Var causal_conv1d(Var x, Var weight, std::size_t dilation) {
  require_same_graph("causal_conv1d", x, weight);
  Graph& g = *x.graph;
  const NdArray& xv = g.node_value(x.id);
  const NdArray& wv = g.node_value(weight.id);
  require_rank("causal_conv1d", xv, 2);
  require_rank("causal_conv1d", wv, 3);
  if (dilation == 0) shape_fail("causal_conv1d", "dilation must be positive");
  const std::size_t steps = xv.dim(0), cin = xv.dim(1);
  const std::size_t width = wv.dim(0), cout = wv.dim(2);
  if (wv.dim(1) != cin || width == 0) {
    shape_fail("causal_conv1d", "weight " + shape_string(wv.shape()) +
                                    " incompatible with input " +
                                    shape_string(xv.shape()));
  }
  NdArray out({steps, cout});
  for (std::size_t t = 0; t < steps; ++t) {
    double* orow = &out[t * cout];
    for (std::size_t k = 0; k < width; ++k) {
      const std::size_t lag = (width - 1 - k) * dilation;
      if (lag > t) continue;
      const double* xrow = &xv[(t - lag) * cin];
      const double* wk = &wv[k * cin * cout];
      for (std::size_t i = 0; i < cin; ++i) {
        const double s = xrow[i];
        if (s == 0.0) continue;
        const double* wrow = wk + i * cout;
        for (std::size_t o = 0; o < cout; ++o) orow[o] += s * wrow[o];
      }
    }
  }
  return g.push(
      OpKind::kCausalConv1d, {x.id, weight.id}, std::move(out),
      [ix = x.id, iw = weight.id, steps, cin, cout, width, dilation](
          Graph& g, std::size_t self) {
        const NdArray& up = g.nodes_[self].grad;
        const NdArray& xv = g.node_value(ix);
        const NdArray& wv = g.node_value(iw);
        const bool dx_needed = g.needs_grad(ix);
        const bool dw_needed = g.needs_grad(iw);
        NdArray* dx = dx_needed ? &g.grad_slot(ix) : nullptr;
        NdArray* dw = dw_needed ? &g.grad_slot(iw) : nullptr;
        for (std::size_t t = 0; t < steps; ++t) {
          const double* urow = &up[t * cout];
          for (std::size_t k = 0; k < width; ++k) {
            const std::size_t lag = (width - 1 - k) * dilation;
            if (lag > t) continue;
            const std::size_t s = t - lag;
            const double* wk = &wv[k * cin * cout];
            for (std::size_t i = 0; i < cin; ++i) {
              const double* wrow = wk + i * cout;
              if (dx) {
                double acc = 0.0;
                for (std::size_t o = 0; o < cout; ++o) acc += wrow[o] * urow[o];
                (*dx)[s * cin + i] += acc;
              }
              if (dw) {
                const double xs = xv[s * cin + i];
                if (xs == 0.0) continue;
                double* dwrow = &(*dw)[k * cin * cout + i * cout];
                for (std::size_t o = 0; o < cout; ++o) dwrow[o] += xs * urow[o];
              }
            }
          }
        }
      });
}

Var sum(Var a) {
  Graph& g = *a.graph;
  const NdArray& av = g.node_value(a.id);
  double total = 0.0;
  for (double v : av.data()) total += v;
  return g.push(OpKind::kSum, {a.id}, NdArray::scalar(total),
                [ia = a.id](Graph& g, std::size_t self) {
                  const double up = g.nodes_[self].grad[0];
                  NdArray& d = g.grad_slot(ia);
                  for (std::size_t i = 0; i < d.size(); ++i) d[i] += up;
                });
}

Var l2_norm(Var a, std::size_t axis) {
  Graph& g = *a.graph;
  const NdArray& av = g.node_value(a.id);
  if (axis >= av.rank()) {
    shape_fail("l2_norm", "axis " + std::to_string(axis) +
                              " out of range for shape " + shape_string(av.shape()));
  }
  const AxisSplit s = split_axis(av.shape(), axis);
  Shape out_shape = av.shape();
  out_shape.erase(out_shape.begin() + static_cast<std::ptrdiff_t>(axis));
  NdArray out(out_shape);
  for (std::size_t o = 0; o < s.outer; ++o) {
    for (std::size_t in = 0; in < s.inner; ++in) {
      double acc = 0.0;
      for (std::size_t e = 0; e < s.extent; ++e) {
        const double v = av[(o * s.extent + e) * s.inner + in];
        acc += v * v;
      }
      out[o * s.inner + in] = std::sqrt(acc);
    }
  }
  return g.push(OpKind::kL2Norm, {a.id}, std::move(out),
                [ia = a.id, s](Graph& g, std::size_t self) {
                  const NdArray& up = g.nodes_[self].grad;
                  const NdArray& norms = g.nodes_[self].value;
                  const NdArray& x = g.node_value(ia);
                  NdArray& d = g.grad_slot(ia);
                  for (std::size_t o = 0; o < s.outer; ++o) {
                    for (std::size_t in = 0; in < s.inner; ++in) {
                      const double n = norms[o * s.inner + in];
                      if (n == 0.0) continue;
                      const double factor = up[o * s.inner + in] / n;
                      for (std::size_t e = 0; e < s.extent; ++e) {
                        const std::size_t idx = (o * s.extent + e) * s.inner + in;
                        d[idx] += factor * x[idx];
                      }
                    }
                  }
                });
}

}  // namespace aia::diff
