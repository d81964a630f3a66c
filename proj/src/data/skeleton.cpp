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

#include "aia/data/skeleton.hpp"

#include <algorithm>
#include <cmath>

#include "aia/error.hpp"

namespace aia::data {

namespace {

constexpr std::array<std::string_view, 8> kCategoryNames = {
    "approaching", "departing", "kicking",     "punching",
    "pushing",     "hugging",   "handshaking", "exchanging",
};

}  // namespace

std::string_view category_name(Category c) {
  return kCategoryNames[static_cast<std::size_t>(c)];
}

std::optional<Category> parse_category(std::string_view name) {
  for (std::size_t i = 0; i < kCategoryNames.size(); ++i) {
    if (kCategoryNames[i] == name) return kAllCategories[i];
  }
  if (name == "shaking hands" || name == "shaking_hands") {
    return Category::kHandshaking;
  }
  return std::nullopt;
}

SkeletonSequence::SkeletonSequence(std::size_t frames, std::size_t joints,
                                   double fill)
    : frames_(frames),
      joints_(joints),
      values_(frames * joints * kCoordsPerJoint, fill) {}

SkeletonSequence::SkeletonSequence(std::size_t frames, std::size_t joints,
                                   std::vector<double> values)
    : frames_(frames), joints_(joints), values_(std::move(values)) {
  if (values_.size() != frames_ * joints_ * kCoordsPerJoint) {
    throw ShapeError("SkeletonSequence: " + std::to_string(frames_) + " frames x " +
                     std::to_string(joints_) + " joints needs " +
                     std::to_string(frames_ * joints_ * kCoordsPerJoint) +
                     " values, got " + std::to_string(values_.size()));
  }
}

SkeletonSequence SkeletonSequence::from_array(const diff::NdArray& array) {
  if (array.rank() != 2 || array.dim(1) % kCoordsPerJoint != 0) {
    throw ShapeError("SkeletonSequence::from_array: shape " +
                     diff::shape_string(array.shape()) +
                     " is not [T, 3N]");
  }
  return SkeletonSequence(array.dim(0), array.dim(1) / kCoordsPerJoint,
                          array.values());
}

diff::NdArray SkeletonSequence::to_array() const {
  return diff::NdArray({frames_, feature_dim()}, values_);
}

SkeletonSequence SkeletonSequence::prefix(std::size_t frames) const {
  if (frames > frames_) {
    throw Error(ErrorKind::kInvalidArgument,
                "prefix: " + std::to_string(frames) + " frames requested from a " +
                    std::to_string(frames_) + "-frame sequence");
  }
  return SkeletonSequence(
      frames, joints_,
      std::vector<double>(values_.begin(),
                          values_.begin() + static_cast<std::ptrdiff_t>(
                                                frames * feature_dim())));
}

SkeletonSequence SkeletonSequence::fit_length(std::size_t frames) const {
  if (frames_ == 0) {
    throw Error(ErrorKind::kInvalidArgument, "fit_length: empty sequence");
  }
  if (frames <= frames_) return prefix(frames);
  SkeletonSequence out(frames, joints_);
  std::copy(values_.begin(), values_.end(), out.values_.begin());
  const auto last = frame(frames_ - 1);
  for (std::size_t t = frames_; t < frames; ++t) {
    std::copy(last.begin(), last.end(), out.frame(t).begin());
  }
  return out;
}

void validate_ranges(const SkeletonSequence& seq, std::string_view what) {
  const std::size_t dim = seq.feature_dim();
  for (std::size_t t = 0; t < seq.frames(); ++t) {
    const auto f = seq.frame(t);
    for (std::size_t i = 0; i < dim; ++i) {
      const Coord c = coord_of(i);
      const double v = f[i];
      if (!std::isfinite(v) || v < domain_min(c) || v > domain_max(c)) {
        throw Error(ErrorKind::kValidation,
                    std::string(what) + ": frame " + std::to_string(t + 1) +
                        ", joint " + std::to_string(i / kCoordsPerJoint) +
                        ", coordinate " + std::to_string(i % kCoordsPerJoint) +
                        " = " + std::to_string(v) + " outside [" +
                        std::to_string(domain_min(c)) + ", " +
                        std::to_string(domain_max(c)) + "]");
      }
    }
  }
}

void validate_record(const InteractionRecord& record) {
  if (record.actor.frames() != record.reactor.frames() ||
      record.actor.joints() != record.reactor.joints()) {
    throw Error(ErrorKind::kValidation,
                "record " + record.set_id + ": actor and reactor shapes differ");
  }
  validate_ranges(record.actor, "actor");
  validate_ranges(record.reactor, "reactor");
}

}  // namespace aia::data
