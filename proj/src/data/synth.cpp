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

#include "aia/data/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "aia/error.hpp"
#include "aia/rng.hpp"

namespace aia::data {

namespace {

enum Joint : std::size_t {
  kHead, kNeck, kTorso,
  kLeftShoulder, kLeftElbow, kLeftHand,
  kRightShoulder, kRightElbow, kRightHand,
  kLeftHip, kLeftKnee, kLeftFoot,
  kRightHip, kRightKnee, kRightFoot,
};

struct Offset {
  double lateral, up, forward;
};

// Rest pose relative to the torso: +lateral is the body's right, +up is up,
// +forward points at the partner.
constexpr std::array<Offset, kDefaultJoints> kRestPose = {{
    {0.00, 0.22, 0.00},   {0.00, 0.15, 0.00},   {0.00, 0.00, 0.00},
    {-0.08, 0.13, 0.00},  {-0.10, 0.03, 0.04},  {-0.10, -0.06, 0.08},
    {0.08, 0.13, 0.00},   {0.10, 0.03, 0.04},   {0.10, -0.06, 0.08},
    {-0.05, -0.08, 0.00}, {-0.05, -0.20, 0.03}, {-0.05, -0.32, 0.00},
    {0.05, -0.08, 0.00},  {0.05, -0.20, 0.03},  {0.05, -0.32, 0.00},
}};

// The two characters face each other along the depth axis: the actor stands
// further from the camera and faces it, the reactor stands nearer and faces
// away, so "toward the partner" is -depth for the actor and +depth for the
// reactor. The image-plane layout is shared by all records and every motion
// happens along the depth axis.
constexpr double kActorX = 0.45;
constexpr double kReactorX = 0.55;
constexpr double kTorsoY = 0.52;
constexpr double kGap = 0.85;

struct RecordParams {
  double actor_depth, amplitude, phase;
};

bool is_upper_body(std::size_t j) { return j <= kRightHand; }
bool is_leg(std::size_t j) {
  return j == kLeftKnee || j == kLeftFoot || j == kRightKnee || j == kRightFoot;
}
bool is_hand_or_elbow(std::size_t j) {
  return j == kLeftHand || j == kRightHand || j == kLeftElbow || j == kRightElbow;
}

double bump(double s) { return std::sin(std::numbers::pi * s); }
double strike(double s) { return std::pow(std::sin(std::numbers::pi * s), 4.0); }
double reach(double s) { return std::min(1.0, 2.0 * s); }

// Forward displacement of template joint j at progress s in [0, 1].
double displacement(Category c, bool actor, std::size_t j, double s,
                    const RecordParams& p) {
  const double a = p.amplitude;
  const double two_pi = 2.0 * std::numbers::pi;
  double d = 0.0;

  switch (c) {
    case Category::kApproaching:
    case Category::kDeparting: {
      const double sign = c == Category::kApproaching ? 1.0 : -1.0;
      if (actor) {
        d += sign * 0.3 * a * s;
        if (is_leg(j)) d += 0.03 * std::sin(2.0 * two_pi * s + p.phase);
      } else {
        d -= sign * 0.15 * a * s;
      }
      break;
    }
    case Category::kKicking: {
      const double b = bump(s);
      if (actor) {
        if (j == kRightFoot) d += 0.25 * a * b;
        if (j == kRightKnee) d += 0.14 * a * b;
      } else if (is_upper_body(j) && j != kTorso) {
        d -= 0.08 * a * b;
      }
      break;
    }
    case Category::kPunching: {
      const double k = strike(s);
      if (actor) {
        if (j == kRightHand) d += 0.3 * a * k;
        if (j == kRightElbow) d += 0.15 * a * k;
      } else if (j == kHead || j == kNeck) {
        d -= 0.1 * a * k;
      }
      break;
    }
    case Category::kPushing: {
      if (actor) {
        if (j == kLeftHand || j == kRightHand) d += 0.2 * a * s;
        if (j == kLeftElbow || j == kRightElbow) d += 0.1 * a * s;
      } else if (j == kHead || j == kNeck || j == kLeftShoulder || j == kRightShoulder) {
        d -= 0.12 * a * s;
      }
      break;
    }
    case Category::kHugging: {
      // The actor steps in; the reactor only opens its arms.
      if (actor) d += 0.1 * a * s;
      if (is_hand_or_elbow(j)) d += 0.1 * a * s;
      break;
    }
    case Category::kHandshaking: {
      const double r = reach(s);
      if (j == kRightHand) d += (0.15 * a + 0.02 * std::sin(3.0 * two_pi * s + p.phase)) * r;
      if (j == kRightElbow) d += 0.07 * a * r;
      break;
    }
    case Category::kExchanging: {
      const double b = bump(s);
      const double scale = actor ? 0.18 : 0.14;
      if (j == kRightHand) d += scale * a * b;
      if (j == kRightElbow) d += 0.5 * scale * a * b;
      break;
    }
  }
  return d;
}

SkeletonSequence render(Category c, bool actor, std::size_t frames,
                        std::size_t joints, const RecordParams& p, UnitRng& rng) {
  SkeletonSequence seq(frames, joints);
  // The actor faces the camera, so its right side appears at -x.
  const double toward = actor ? -1.0 : 1.0;
  const double lateral_sign = actor ? -1.0 : 1.0;
  const double torso_x = actor ? kActorX : kReactorX;
  const double torso_depth = actor ? p.actor_depth : p.actor_depth - kGap;
  for (std::size_t t = 0; t < frames; ++t) {
    const double s = static_cast<double>(t) / static_cast<double>(frames - 1);
    for (std::size_t j = 0; j < joints; ++j) {
      const std::size_t tj = j % kDefaultJoints;
      const Offset& rest = kRestPose[tj];
      const double d = displacement(c, actor, tj, s, p);
      // The torso is the noise-free root joint.
      const double noise = tj == kTorso ? 0.0 : 0.001;
      const double x = torso_x + lateral_sign * rest.lateral + rng.in(-noise, noise);
      const double y = kTorsoY + rest.up + rng.in(-noise, noise);
      const double z = torso_depth + toward * (rest.forward + d) + rng.in(-noise, noise);
      seq.at(t, j, Coord::kX) = std::clamp(x, 0.0, kMaxPlanar);
      seq.at(t, j, Coord::kY) = std::clamp(y, 0.0, kMaxPlanar);
      seq.at(t, j, Coord::kDepth) = std::clamp(z, 0.0, kMaxDepth);
    }
  }
  return seq;
}

}  // namespace

const std::vector<std::string>& sbu_set_ids() {
  static const std::vector<std::string> ids = {
      "s01s02", "s01s03", "s01s07", "s02s01", "s02s03", "s02s06", "s02s07",
      "s03s02", "s03s04", "s03s05", "s03s06", "s04s02", "s04s03", "s04s06",
      "s05s02", "s05s03", "s06s02", "s06s03", "s06s04", "s07s01", "s07s03",
  };
  return ids;
}

std::vector<InteractionRecord> synth_generate(std::uint64_t seed,
                                              std::size_t per_category,
                                              std::size_t frames,
                                              std::size_t joints) {
  if (frames < 2) {
    throw Error(ErrorKind::kInvalidArgument, "synth_generate: need at least 2 frames");
  }
  if (joints == 0) {
    throw Error(ErrorKind::kInvalidArgument, "synth_generate: need at least 1 joint");
  }
  UnitRng rng(seed);
  const auto& sets = sbu_set_ids();
  std::vector<InteractionRecord> records;
  records.reserve(per_category * kAllCategories.size());
  for (std::size_t round = 0; round < per_category; ++round) {
    for (Category c : kAllCategories) {
      RecordParams p;
      p.actor_depth = rng.in(3.5, 3.8);
      p.amplitude = rng.in(0.8, 1.2);
      p.phase = rng.in(0.0, 2.0 * std::numbers::pi);
      InteractionRecord r;
      r.category = c;
      r.set_id = sets[records.size() % sets.size()];
      r.actor = render(c, true, frames, joints, p, rng);
      r.reactor = render(c, false, frames, joints, p, rng);
      records.push_back(std::move(r));
    }
  }
  return records;
}

}  // namespace aia::data
