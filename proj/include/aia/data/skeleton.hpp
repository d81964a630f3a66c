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
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aia/diff/ndarray.hpp"

namespace aia::data {

inline constexpr std::size_t kDefaultJoints = 15;
inline constexpr std::size_t kCoordsPerJoint = 3;

// Coordinate domain of SBU Kinect data: x, y in [0, 1], depth in [0, 7.8125].
inline constexpr double kMaxPlanar = 1.0;
inline constexpr double kMaxDepth = 7.8125;

enum class Coord : std::size_t { kX = 0, kY = 1, kDepth = 2 };

inline double domain_min(Coord) { return 0.0; }
inline double domain_max(Coord c) {
  return c == Coord::kDepth ? kMaxDepth : kMaxPlanar;
}
// Coordinate kind of flattened feature index i (joint-major, then x/y/depth).
inline Coord coord_of(std::size_t feature) {
  return static_cast<Coord>(feature % kCoordsPerJoint);
}

enum class Category {
  kApproaching,
  kDeparting,
  kKicking,
  kPunching,
  kPushing,
  kHugging,
  kHandshaking,
  kExchanging,
};

inline constexpr std::array<Category, 8> kAllCategories = {
    Category::kApproaching, Category::kDeparting,  Category::kKicking,
    Category::kPunching,    Category::kPushing,    Category::kHugging,
    Category::kHandshaking, Category::kExchanging,
};

std::string_view category_name(Category c);
std::optional<Category> parse_category(std::string_view name);

// T frames of N joints, stored flattened as T x 3N (joint-major, x/y/depth).
class SkeletonSequence {
 public:
  SkeletonSequence() = default;
  SkeletonSequence(std::size_t frames, std::size_t joints, double fill = 0.0);
  SkeletonSequence(std::size_t frames, std::size_t joints,
                   std::vector<double> values);

  static SkeletonSequence from_array(const diff::NdArray& array);

  std::size_t frames() const noexcept { return frames_; }
  std::size_t joints() const noexcept { return joints_; }
  std::size_t feature_dim() const noexcept { return joints_ * kCoordsPerJoint; }
  bool empty() const noexcept { return frames_ == 0; }

  std::span<double> frame(std::size_t t) {
    return {values_.data() + t * feature_dim(), feature_dim()};
  }
  std::span<const double> frame(std::size_t t) const {
    return {values_.data() + t * feature_dim(), feature_dim()};
  }
  double& at(std::size_t t, std::size_t joint, Coord c) {
    return values_[t * feature_dim() + joint * kCoordsPerJoint +
                   static_cast<std::size_t>(c)];
  }
  double at(std::size_t t, std::size_t joint, Coord c) const {
    return values_[t * feature_dim() + joint * kCoordsPerJoint +
                   static_cast<std::size_t>(c)];
  }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }

  diff::NdArray to_array() const;

  // First `frames` frames.
  SkeletonSequence prefix(std::size_t frames) const;
  // Truncates, or repeats the last frame, to reach exactly `frames`.
  SkeletonSequence fit_length(std::size_t frames) const;

  friend bool operator==(const SkeletonSequence&, const SkeletonSequence&) = default;

 private:
  std::size_t frames_ = 0;
  std::size_t joints_ = 0;
  std::vector<double> values_;
};

struct InteractionRecord {
  SkeletonSequence actor;
  SkeletonSequence reactor;
  Category category = Category::kApproaching;
  std::string set_id;
};

struct SequencePair {
  SkeletonSequence input;
  SkeletonSequence target;
  Category category = Category::kApproaching;
};

struct DatasetSplit {
  std::vector<SequencePair> train;
  std::vector<SequencePair> test;
};

// Throws a validation error naming `what`, the frame and feature when a value
// lies outside the SBU coordinate domain or is not finite.
void validate_ranges(const SkeletonSequence& seq, std::string_view what);
void validate_record(const InteractionRecord& record);

}  // namespace aia::data
