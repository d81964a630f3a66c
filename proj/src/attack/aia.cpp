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

#include "aia/attack/aia.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "aia/attack/losses.hpp"
#include "aia/data/dataset.hpp"
#include "aia/error.hpp"

namespace aia::attack {

using data::SkeletonSequence;
using diff::Graph;
using diff::NdArray;
using diff::Var;

namespace {

double sign(double v) { return (v > 0.0) - (v < 0.0); }

// [x - eps, x + eps] with both ends pulled in until the floating-point
// distance to x is at most eps.
std::pair<double, double> epsilon_box(double x, double eps) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  double lo = x - eps;
  double hi = x + eps;
  while (x - lo > eps) lo = std::nextafter(lo, kInf);
  while (hi - x > eps) hi = std::nextafter(hi, -kInf);
  return {lo, hi};
}

}  // namespace

std::string_view update_rule_name(UpdateRule rule) {
  return rule == UpdateRule::kSignPgd ? "pgd" : "adam";
}

std::optional<UpdateRule> parse_update_rule(std::string_view name) {
  if (name == "pgd") return UpdateRule::kSignPgd;
  if (name == "adam") return UpdateRule::kAdam;
  return std::nullopt;
}

PerturbationMask PerturbationMask::depth_only(std::size_t joints) {
  std::vector<bool> bits(joints * data::kCoordsPerJoint, false);
  for (std::size_t j = 0; j < joints; ++j) {
    bits[j * data::kCoordsPerJoint + static_cast<std::size_t>(data::Coord::kDepth)] = true;
  }
  return PerturbationMask(std::move(bits));
}

PerturbationMask PerturbationMask::all(std::size_t joints) {
  return PerturbationMask(std::vector<bool>(joints * data::kCoordsPerJoint, true));
}

std::string_view PerturbationMask::name() const {
  const std::size_t joints = enabled_.size() / data::kCoordsPerJoint;
  if (enabled_ == all(joints).enabled_) return "all";
  if (enabled_ == depth_only(joints).enabled_) return "depth";
  return "custom";
}

void AttackConfig::validate(std::size_t frames, std::size_t joints) const {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::kConfig, "attack: " + what); };
  if (!(epsilon > 0.0) || std::isnan(epsilon)) fail("epsilon must be > 0");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) fail("alpha must be > 0");
  if (steps < 1) fail("steps must be >= 1");
  if (!(lambda >= 0.0 && lambda <= 1.0)) fail("lambda must lie in [0, 1]");
  if (!(kappa >= 0.0)) fail("kappa must be >= 0");
  if (!(adam_learning_rate > 0.0)) fail("adam learning rate must be > 0");
  if (target.frames() != frames || target.joints() != joints) {
    fail("target is " + std::to_string(target.frames()) + "x" +
         std::to_string(target.joints()) + ", input is " + std::to_string(frames) + "x" +
         std::to_string(joints));
  }
  if (mask.size() != joints * data::kCoordsPerJoint) {
    fail("mask covers " + std::to_string(mask.size()) + " coordinates, frames have " +
         std::to_string(joints * data::kCoordsPerJoint));
  }
}

namespace {

Var combine_losses(Var output, Var adversarial, const NdArray& target,
                   const AttackConfig& config) {
  const double eta = config.kappa / static_cast<double>(target.dim(0));
  Var loss = spatial_loss(output, target, eta);
  if (config.lambda > 0.0) {
    loss = diff::add(loss, diff::scale(temporal_loss(adversarial), config.lambda));
  }
  return loss;
}

}  // namespace

Var adversarial_loss(const models::SequenceRegressor& model, Graph& graph,
                     Var adversarial, const NdArray& target, const AttackConfig& config) {
  return combine_losses(model.forward(graph, adversarial), adversarial, target, config);
}

SkeletonSequence pgd_step(const SkeletonSequence& original, const SkeletonSequence& current,
                          const NdArray& grad, const AttackConfig& config,
                          diff::AdamState* adam) {
  const std::size_t dim = original.feature_dim();
  if (current.frames() != original.frames() || current.joints() != original.joints() ||
      grad.shape() != diff::Shape{original.frames(), dim}) {
    throw ShapeError("pgd_step: original, iterate and gradient shapes disagree");
  }
  if (config.mask.size() != dim) {
    throw ShapeError("pgd_step: mask size " + std::to_string(config.mask.size()) +
                     " vs frame dimension " + std::to_string(dim));
  }

  std::vector<NdArray> candidate{current.to_array()};
  if (config.update_rule == UpdateRule::kAdam) {
    if (adam == nullptr) {
      throw Error(ErrorKind::kInvalidArgument, "pgd_step: Adam rule needs optimizer state");
    }
    const std::vector<NdArray> grads{grad};
    diff::adam_update(candidate, grads,
                      *adam, diff::AdamOptions{.learning_rate = config.adam_learning_rate});
  } else {
    NdArray& c = candidate[0];
    for (std::size_t i = 0; i < c.size(); ++i) c[i] -= config.alpha * sign(grad[i]);
  }

  SkeletonSequence next(original.frames(), original.joints());
  const auto x = original.values();
  const NdArray& c = candidate[0];
  auto out = next.values();
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::size_t feature = i % dim;
    if (!config.mask[feature]) {
      out[i] = x[i];
      continue;
    }
    auto [lo, hi] = epsilon_box(x[i], config.epsilon);
    if (config.clamp_to_domain) {
      const data::Coord coord = data::coord_of(feature);
      const double dlo = std::max(lo, data::domain_min(coord));
      const double dhi = std::min(hi, data::domain_max(coord));
      // An original already outside the domain keeps the plain epsilon box.
      if (dlo <= dhi) {
        lo = dlo;
        hi = dhi;
      }
    }
    out[i] = std::clamp(c[i], lo, hi);
  }
  return next;
}

AttackResult run_attack(const models::SequenceRegressor& model,
                        const SkeletonSequence& original, const AttackConfig& config,
                        const IterateObserver& observer) {
  model.check_input({original.frames(), original.feature_dim()});
  config.validate(original.frames(), original.joints());

  const NdArray target = config.target.to_array();
  AttackResult result;
  result.loss_trace.reserve(config.steps);
  result.distance_trace.reserve(config.steps + 1);

  SkeletonSequence iterate = original;
  SkeletonSequence best = original;
  double best_distance = std::numeric_limits<double>::infinity();
  diff::AdamState adam;
  if (observer) observer(0, iterate);

  for (std::size_t step = 0; step < config.steps; ++step) {
    Graph graph;
    const Var x = graph.leaf(iterate.to_array(), true);
    const Var output = model.forward(graph, x);
    const Var loss = combine_losses(output, x, target, config);
    const double value = loss.value().item();
    if (std::isnan(value)) {
      throw Error(ErrorKind::kNumeric,
                  "attack: adversarial loss is NaN at step " + std::to_string(step));
    }
    result.loss_trace.push_back(value);

    const double dist = distance_sum(output.value(), target);
    result.distance_trace.push_back(dist);
    if (step == 0) {
      result.initial_distance_sum = dist;
      result.natural_output = model.predict(original);
    }
    if (dist < best_distance) {
      best_distance = dist;
      best = iterate;
      result.selected_step = step;
    }

    graph.backward(loss);
    iterate = pgd_step(original, iterate, graph.grad(x), config, &adam);
    if (observer) observer(step + 1, iterate);
  }

  const double final_distance = distance_sum(model.predict(iterate).to_array(), target);
  result.distance_trace.push_back(final_distance);
  if (!config.keep_best || final_distance < best_distance) {
    best = iterate;
    result.selected_step = config.steps;
  }

  result.adversarial = std::move(best);
  result.adversarial_output = model.predict(result.adversarial);
  result.distance_sum = distance_sum(result.adversarial_output, config.target);
  result.success = result.distance_sum < config.kappa;
  const auto a = result.adversarial.values();
  const auto o = original.values();
  for (std::size_t i = 0; i < a.size(); ++i) {
    result.max_perturbation = std::max(result.max_perturbation, std::fabs(a[i] - o[i]));
  }
  return result;
}

Json attack_result_to_json(const AttackResult& result, const AttackConfig& config,
                           const SkeletonSequence& original) {
  Json cfg;
  cfg["epsilon"] = config.epsilon;
  cfg["alpha"] = config.alpha;
  cfg["steps"] = config.steps;
  cfg["lambda"] = config.lambda;
  cfg["kappa"] = config.kappa;
  cfg["eta"] = config.kappa / static_cast<double>(original.frames());
  cfg["update_rule"] = std::string(update_rule_name(config.update_rule));
  cfg["adam_learning_rate"] = config.adam_learning_rate;
  cfg["mask"] = std::string(config.mask.name());
  cfg["clamp_to_domain"] = config.clamp_to_domain;
  cfg["keep_best"] = config.keep_best;

  Json doc;
  doc["config"] = std::move(cfg);
  doc["success"] = result.success;
  doc["distance_sum"] = result.distance_sum;
  doc["initial_distance_sum"] = result.initial_distance_sum;
  doc["selected_step"] = result.selected_step;
  doc["max_perturbation"] = result.max_perturbation;
  doc["loss_trace"] = result.loss_trace;
  doc["distance_trace"] = result.distance_trace;
  doc["joints"] = original.joints();
  doc["input"] = data::sequence_to_json(original);
  doc["target"] = data::sequence_to_json(config.target);
  doc["adversarial"] = data::sequence_to_json(result.adversarial);
  doc["natural_output"] = data::sequence_to_json(result.natural_output);
  doc["adversarial_output"] = data::sequence_to_json(result.adversarial_output);
  return doc;
}

}  // namespace aia::attack
