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


#include "aia/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <iterator>
#include <type_traits>

#include "aia/error.hpp"

namespace aia::cli {

namespace {

[[noreturn]] void fail(const std::string& message) {
  throw Error(ErrorKind::kConfig, message);
}

// Reads the keys of one JSON object and rejects whatever it was not asked for.
class Section {
 public:
  Section(const Json& doc, std::string path) : doc_(doc), path_(std::move(path)) {
    if (!doc_.is_object()) fail(name() + " must be an object");
  }

  const Json* find(const char* key) {
    seen_.insert(key);
    auto it = doc_.find(key);
    return it == doc_.end() ? nullptr : &*it;
  }

  // Seeds are 64-bit; size_t has the same width on every supported target.
  static_assert(std::is_same_v<std::size_t, std::uint64_t>);

  void read(const char* key, std::size_t& out) {
    if (const Json* v = find(key)) {
      if (!v->is_number_unsigned()) fail(name(key) + " must be a non-negative integer");
      out = v->get<std::size_t>();
    }
  }

  void read(const char* key, double& out) {
    if (const Json* v = find(key)) {
      if (!v->is_number()) fail(name(key) + " must be a number");
      out = v->get<double>();
    }
  }

  void read(const char* key, bool& out) {
    if (const Json* v = find(key)) {
      if (!v->is_boolean()) fail(name(key) + " must be true or false");
      out = v->get<bool>();
    }
  }

  void read(const char* key, std::string& out) {
    if (const Json* v = find(key)) {
      if (!v->is_string()) fail(name(key) + " must be a string");
      out = v->get<std::string>();
    }
  }

  void finish() const {
    for (auto it = doc_.begin(); it != doc_.end(); ++it) {
      if (!seen_.contains(it.key())) fail("unknown key " + name(it.key()));
    }
  }

  std::string name() const { return path_.empty() ? "config" : path_; }
  std::string name(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

 private:
  const Json& doc_;
  std::string path_;
  std::set<std::string> seen_;
};

std::string mode_name(KappaMode mode) {
  return mode == KappaMode::kSurvey ? "survey" : "percentile";
}

}  // namespace

models::ModelConfig ModelSection::model_config(std::size_t joints) const {
  const bool tiny = preset == "tiny";
  if (architecture == models::Architecture::kTcn) {
    return tiny ? models::TcnConfig::tiny(joints) : models::TcnConfig::full(joints);
  }
  return tiny ? models::GruConfig::tiny(joints) : models::GruConfig::full(joints);
}

attack::AttackConfig AttackSection::attack_config(std::size_t joints) const {
  attack::AttackConfig c;
  c.epsilon = epsilon;
  c.alpha = alpha;
  c.steps = steps;
  c.lambda = lambda;
  c.mask = mask == "all" ? attack::PerturbationMask::all(joints)
                         : attack::PerturbationMask::depth_only(joints);
  c.update_rule = update_rule;
  c.adam_learning_rate = adam_learning_rate;
  c.clamp_to_domain = clamp_to_domain;
  c.keep_best = keep_best;
  return c;
}

void RunConfig::validate() const {
  if (data.per_category < 1) fail("data.per_category must be >= 1");
  if (data.frames < 2) fail("data.frames must be >= 2");
  if (data.joints < 1) fail("data.joints must be >= 1");
  if (model.preset != "tiny" && model.preset != "full") {
    fail("model.preset must be \"tiny\" or \"full\", got \"" + model.preset + "\"");
  }
  if (train.epochs < 1) fail("train.epochs must be >= 1");
  if (!(train.learning_rate > 0.0) || !std::isfinite(train.learning_rate)) {
    fail("train.learning_rate must be positive");
  }
  if (!(attack.epsilon > 0.0) || !std::isfinite(attack.epsilon)) {
    fail("attack.epsilon must be positive");
  }
  if (!(attack.alpha > 0.0) || !std::isfinite(attack.alpha)) {
    fail("attack.alpha must be positive");
  }
  if (attack.steps < 1) fail("attack.steps must be >= 1");
  if (!(attack.lambda >= 0.0 && attack.lambda <= 1.0)) {
    fail("attack.lambda must lie in [0, 1]");
  }
  if (attack.mask != "depth" && attack.mask != "all") {
    fail("attack.mask must be \"depth\" or \"all\", got \"" + attack.mask + "\"");
  }
  if (!(attack.adam_learning_rate > 0.0) || !std::isfinite(attack.adam_learning_rate)) {
    fail("attack.adam_learning_rate must be positive");
  }
  if (eval.epsilons.empty()) fail("eval.epsilons must not be empty");
  for (double e : eval.epsilons) {
    if (!(e > 0.0) || !std::isfinite(e)) fail("eval.epsilons must be positive");
  }
  if (!(eval.kappa_percentile >= 0.0 && eval.kappa_percentile <= 100.0)) {
    fail("eval.kappa_percentile must lie in [0, 100]");
  }
  for (const auto& [label, kappa] : eval.tolerances) {
    if (!(kappa >= 0.0)) fail("eval.tolerances." + label + " must be >= 0");
  }
  if (eval.threads < 1) fail("eval.threads must be >= 1");
}

RunConfig config_from_json(const Json& doc) {
  RunConfig c;
  Section root(doc, "");
  root.read("seed", c.seed);

  if (const Json* d = root.find("data")) {
    Section s(*d, "data");
    s.read("per_category", c.data.per_category);
    s.read("frames", c.data.frames);
    s.read("joints", c.data.joints);
    if (const Json* h = s.find("held_out")) {
      if (!h->is_array()) fail("data.held_out must be an array of set ids");
      c.data.held_out.clear();
      for (const Json& id : *h) {
        if (!id.is_string()) fail("data.held_out must be an array of set ids");
        c.data.held_out.insert(id.get<std::string>());
      }
    }
    s.finish();
  }

  if (const Json* m = root.find("model")) {
    Section s(*m, "model");
    std::string arch(models::architecture_name(c.model.architecture));
    s.read("architecture", arch);
    const auto parsed = models::parse_architecture(arch);
    if (!parsed) fail("model.architecture must be \"tcn\" or \"gru\", got \"" + arch + "\"");
    c.model.architecture = *parsed;
    s.read("preset", c.model.preset);
    s.finish();
  }

  if (const Json* t = root.find("train")) {
    Section s(*t, "train");
    s.read("epochs", c.train.epochs);
    s.read("learning_rate", c.train.learning_rate);
    s.read("batch_size", c.train.batch_size);
    s.finish();
  }

  if (const Json* a = root.find("attack")) {
    Section s(*a, "attack");
    s.read("epsilon", c.attack.epsilon);
    s.read("alpha", c.attack.alpha);
    s.read("steps", c.attack.steps);
    s.read("lambda", c.attack.lambda);
    s.read("mask", c.attack.mask);
    std::string rule(attack::update_rule_name(c.attack.update_rule));
    s.read("update_rule", rule);
    const auto parsed = attack::parse_update_rule(rule);
    if (!parsed) fail("attack.update_rule must be \"pgd\" or \"adam\", got \"" + rule + "\"");
    c.attack.update_rule = *parsed;
    s.read("adam_learning_rate", c.attack.adam_learning_rate);
    s.read("clamp_to_domain", c.attack.clamp_to_domain);
    s.read("keep_best", c.attack.keep_best);
    s.finish();
  }

  if (const Json* e = root.find("eval")) {
    Section s(*e, "eval");
    if (const Json* eps = s.find("epsilons")) {
      if (!eps->is_array()) fail("eval.epsilons must be an array of numbers");
      c.eval.epsilons.clear();
      for (const Json& v : *eps) {
        if (!v.is_number()) fail("eval.epsilons must be an array of numbers");
        c.eval.epsilons.push_back(v.get<double>());
      }
    }
    std::string mode = mode_name(c.eval.kappa_mode);
    s.read("kappa_mode", mode);
    if (mode == "survey") {
      c.eval.kappa_mode = KappaMode::kSurvey;
    } else if (mode == "percentile") {
      c.eval.kappa_mode = KappaMode::kPercentile;
    } else {
      fail("eval.kappa_mode must be \"survey\" or \"percentile\", got \"" + mode + "\"");
    }
    s.read("kappa_percentile", c.eval.kappa_percentile);
    if (const Json* tol = s.find("tolerances")) {
      if (!tol->is_object()) fail("eval.tolerances must map labels to numbers");
      for (auto it = tol->begin(); it != tol->end(); ++it) {
        if (!it->is_number()) fail("eval.tolerances." + it.key() + " must be a number");
        c.eval.tolerances[it.key()] = it->get<double>();
      }
    }
    if (const Json* o = s.find("objective")) {
      if (!o->is_string()) fail("eval.objective must be a string");
      c.eval.objective = o->get<std::string>();
    }
    s.read("threads", c.eval.threads);
    s.finish();
  }

  root.finish();
  c.validate();
  return c;
}

Json config_to_json(const RunConfig& c) {
  Json doc;
  doc["seed"] = c.seed;
  doc["data"] = {{"per_category", c.data.per_category},
                 {"frames", c.data.frames},
                 {"joints", c.data.joints},
                 {"held_out", c.data.held_out}};
  doc["model"] = {{"architecture", models::architecture_name(c.model.architecture)},
                  {"preset", c.model.preset}};
  doc["train"] = {{"epochs", c.train.epochs},
                  {"learning_rate", c.train.learning_rate},
                  {"batch_size", c.train.batch_size}};
  doc["attack"] = {{"epsilon", c.attack.epsilon},
                   {"alpha", c.attack.alpha},
                   {"steps", c.attack.steps},
                   {"lambda", c.attack.lambda},
                   {"mask", c.attack.mask},
                   {"update_rule", attack::update_rule_name(c.attack.update_rule)},
                   {"adam_learning_rate", c.attack.adam_learning_rate},
                   {"clamp_to_domain", c.attack.clamp_to_domain},
                   {"keep_best", c.attack.keep_best}};
  Json eval = {{"epsilons", c.eval.epsilons},
               {"kappa_mode", mode_name(c.eval.kappa_mode)},
               {"kappa_percentile", c.eval.kappa_percentile},
               {"tolerances", Json::object()},
               {"threads", c.eval.threads}};
  for (const auto& [label, kappa] : c.eval.tolerances) eval["tolerances"][label] = kappa;
  if (c.eval.objective) eval["objective"] = *c.eval.objective;
  doc["eval"] = std::move(eval);
  return doc;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open config " + path.string());
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) return RunConfig{};
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kConfig, path.string() + ": " + e.what());
  }
  return config_from_json(doc);
}

}  // namespace aia::cli
