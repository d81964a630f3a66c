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

#include "aia/diff/ndarray.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "aia/error.hpp"

namespace aia::diff {

std::size_t shape_size(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                         std::multiplies<>());
}

std::string shape_string(const Shape& shape) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) os << ',';
    os << shape[i];
  }
  os << ']';
  return os.str();
}

NdArray::NdArray(Shape shape, double fill)
    : shape_(std::move(shape)), data_(shape_size(shape_), fill) {}

NdArray::NdArray(Shape shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (data_.size() != shape_size(shape_)) {
    throw ShapeError("NdArray: shape " + shape_string(shape_) + " needs " +
                     std::to_string(shape_size(shape_)) + " elements, got " +
                     std::to_string(data_.size()));
  }
}

NdArray NdArray::matrix(std::size_t rows, std::size_t cols,
                        std::initializer_list<double> values) {
  return NdArray({rows, cols}, std::vector<double>(values));
}

double NdArray::item() const {
  if (data_.size() != 1) {
    throw ShapeError("item: array of shape " + shape_string(shape_) +
                     " is not a scalar");
  }
  return data_[0];
}

void NdArray::fill(double value) { std::fill(data_.begin(), data_.end(), value); }

bool NdArray::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

}  // namespace aia::diff
