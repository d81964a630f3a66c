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


#include "aia/cli/app.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <memory>
#include <set>
#include <sstream>

#include "CLI11.hpp"

#include "aia/attack/aia.hpp"
#include "aia/cli/config.hpp"
#include "aia/cli/manifest.hpp"
#include "aia/data/dataset.hpp"
#include "aia/data/synth.hpp"
#include "aia/error.hpp"
#include "aia/eval/sweep.hpp"
#include "aia/eval/tolerance.hpp"
#include "aia/models/checkpoint.hpp"
#include "aia/models/train.hpp"

namespace aia::cli {

namespace {

namespace fs = std::filesystem;

// Every flag of every command; each command registers the ones it accepts.
struct Flags {
  std::string config;
  std::string out;
  std::string data;
  std::string checkpoint;
  std::string model;
  std::string preset;
  std::string model_id;
  std::string objective;
  std::string update_rule;
  std::string mask;
  std::string kappa_mode;
  std::string attack_result;
  std::uint64_t seed = 0;
  std::size_t per_category = 0;
  std::size_t frames = 0;
  std::size_t joints = 0;
  std::size_t epochs = 0;
  std::size_t batch_size = 0;
  std::size_t steps = 0;
  std::size_t sample = 0;
  std::size_t record = 0;
  std::size_t threads = 0;
  double learning_rate = 0.0;
  double alpha = 0.0;
  double lambda = 0.0;
  double adam_learning_rate = 0.0;
  double kappa_percentile = 0.0;
  std::vector<double> epsilons;
  std::vector<std::string> sources;
};

bool given(const CLI::App* cmd, const std::string& name) {
  const CLI::Option* opt = cmd->get_option_no_throw(name);
  return opt != nullptr && opt->count() > 0;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Json read_json(const fs::path& path) {
  try {
    return Json::parse(read_text(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kFormat, path.string() + ": " + e.what());
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::kIo, "write failed: " + path.string());
}

std::string absolute_string(const std::string& path) {
  return fs::absolute(path).lexically_normal().string();
}

// Flags override the config file, which overrides the built-in defaults.
RunConfig resolve_config(const CLI::App* cmd, const Flags& f) {
  RunConfig c = f.config.empty() ? RunConfig{} : load_config(f.config);
  if (given(cmd, "--seed")) c.seed = f.seed;
  if (given(cmd, "--per-category")) c.data.per_category = f.per_category;
  if (given(cmd, "--frames")) c.data.frames = f.frames;
  if (given(cmd, "--joints")) c.data.joints = f.joints;
  if (given(cmd, "--model")) c.model.architecture = *models::parse_architecture(f.model);
  if (given(cmd, "--preset")) c.model.preset = f.preset;
  if (given(cmd, "--epochs")) c.train.epochs = f.epochs;
  if (given(cmd, "--lr")) c.train.learning_rate = f.learning_rate;
  if (given(cmd, "--batch-size")) c.train.batch_size = f.batch_size;
  if (given(cmd, "--epsilon")) {
    if (cmd->get_name() == "eval") {
      c.eval.epsilons = f.epsilons;
    } else {
      c.attack.epsilon = f.epsilons.back();
    }
  }
  if (given(cmd, "--alpha")) c.attack.alpha = f.alpha;
  if (given(cmd, "--steps")) c.attack.steps = f.steps;
  if (given(cmd, "--lambda")) c.attack.lambda = f.lambda;
  if (given(cmd, "--update-rule")) c.attack.update_rule = *attack::parse_update_rule(f.update_rule);
  if (given(cmd, "--adam-lr")) c.attack.adam_learning_rate = f.adam_learning_rate;
  if (given(cmd, "--mask")) c.attack.mask = f.mask;
  if (given(cmd, "--objective")) c.eval.objective = f.objective;
  if (given(cmd, "--kappa-mode")) {
    c.eval.kappa_mode = f.kappa_mode == "percentile" ? KappaMode::kPercentile : KappaMode::kSurvey;
  }
  if (given(cmd, "--kappa-percentile")) c.eval.kappa_percentile = f.kappa_percentile;
  if (given(cmd, "--threads")) c.eval.threads = f.threads;
  c.validate();
  return c;
}

RunManifest start_manifest(const std::string& command, const RunConfig& c) {
  RunManifest m;
  m.command = command;
  m.config = config_to_json(c);
  m.seed = c.seed;
  m.tool_version = tool_version();
  m.started_at = utc_timestamp();
  return m;
}

void finish_manifest(const fs::path& dir, RunManifest& m) {
  m.finished_at = utc_timestamp();
  write_manifest(dir, m);
}

std::optional<models::Architecture> expected_architecture(const CLI::App* cmd,
                                                          const Flags& f) {
  if (!given(cmd, "--model")) return std::nullopt;
  return models::parse_architecture(f.model);
}

// Model, attack inputs (actors of the held-out records) and objectives with
// their tolerances resolved.
struct EvalSetup {
  std::unique_ptr<models::SequenceRegressor> model;
  std::vector<data::InteractionRecord> records;
  std::vector<data::InteractionRecord> test;
  std::vector<data::SkeletonSequence> inputs;
  std::vector<eval::Objective> objectives;
};

EvalSetup prepare_eval(const CLI::App* cmd, const Flags& f, const RunConfig& c) {
  EvalSetup s;
  s.model = models::load_model(f.checkpoint, expected_architecture(cmd, f));
  s.records = data::load_records(f.data);
  s.test = data::held_out_records(s.records, c.data.held_out);
  if (s.test.empty()) {
    throw Error(ErrorKind::kInvalidArgument,
                "test set is empty: no record of " + f.data + " belongs to a held-out set");
  }
  for (const auto& r : s.test) s.inputs.push_back(r.actor);

  eval::ToleranceTable table = eval::ToleranceTable::survey_defaults();
  for (const auto& [label, kappa] : c.eval.tolerances) table.set(label, kappa);
  s.objectives = eval::build_objectives(s.test, s.records, table, c.seed);
  if (c.eval.objective) {
    const auto it = std::find_if(s.objectives.begin(), s.objectives.end(),
                                 [&](const eval::Objective& o) { return o.label == *c.eval.objective; });
    if (it == s.objectives.end()) {
      std::string known;
      for (const auto& o : s.objectives) known += (known.empty() ? "" : ", ") + o.label;
      throw Error(ErrorKind::kInvalidArgument,
                  "unknown objective '" + *c.eval.objective + "' (available: " + known + ")");
    }
    s.objectives = {*it};
  }
  if (c.eval.kappa_mode == KappaMode::kPercentile) {
    eval::assign_percentile_kappas(*s.model, s.inputs, s.objectives, c.eval.kappa_percentile);
  }
  return s;
}

int cmd_synth(const CLI::App* cmd, const Flags& f, std::ostream& out) {
  const RunConfig c = resolve_config(cmd, f);
  RunManifest m = start_manifest("synth", c);
  const auto records =
      data::synth_generate(c.seed, c.data.per_category, c.data.frames, c.data.joints);
  const fs::path dir = f.out;
  ArtifactLock lock(dir);
  data::save_records(dir / "dataset.json", records);
  m.outputs = {"dataset.json"};
  finish_manifest(dir, m);
  out << "wrote " << (dir / "dataset.json").string() << " (" << records.size()
      << " records)\n";
  return 0;
}

int cmd_train(const CLI::App* cmd, const Flags& f, std::ostream& out) {
  const RunConfig c = resolve_config(cmd, f);
  RunManifest m = start_manifest("train", c);
  m.inputs["data"] = absolute_string(f.data);

  const auto records = data::load_records(f.data);
  std::vector<data::SequencePair> pairs;
  for (const auto& r : records) {
    if (c.data.held_out.contains(r.set_id)) continue;
    for (auto& p : data::make_pairs(r)) pairs.push_back(std::move(p));
  }
  if (pairs.empty()) {
    throw Error(ErrorKind::kInvalidArgument,
                "train set is empty: every record of " + f.data + " is held out");
  }
  auto model = models::make_model(c.model.model_config(pairs.front().input.joints()), c.seed);
  models::TrainConfig tc = c.train;
  tc.seed = c.seed;
  const auto result = models::train(*model, pairs, tc);

  const fs::path dir = f.out;
  ArtifactLock lock(dir);
  models::save_model(*model, dir / "model.json");
  std::string history = "epoch,loss\n";
  for (std::size_t e = 0; e < result.loss_history.size(); ++e) {
    history += std::to_string(e) + "," + format_double(result.loss_history[e]) + "\n";
  }
  write_text(dir / "loss_history.csv", history);
  m.outputs = {"model.json", "loss_history.csv"};
  finish_manifest(dir, m);
  out << "trained " << models::architecture_name(model->architecture()) << " on "
      << pairs.size() << " pairs: loss " << format_double(result.loss_history.front())
      << " -> " << format_double(result.final_loss) << "\n";
  return 0;
}

int cmd_attack(const CLI::App* cmd, const Flags& f, std::ostream& out) {
  const RunConfig c = resolve_config(cmd, f);
  RunManifest m = start_manifest("attack", c);
  m.inputs["checkpoint"] = absolute_string(f.checkpoint);
  m.inputs["data"] = absolute_string(f.data);

  EvalSetup s = prepare_eval(cmd, f, c);
  if (f.sample >= s.inputs.size()) {
    throw Error(ErrorKind::kInvalidArgument,
                "sample " + std::to_string(f.sample) + " out of range, the test set has " +
                    std::to_string(s.inputs.size()) + " inputs");
  }
  const eval::Objective& objective = s.objectives.front();
  const data::SkeletonSequence& input = s.inputs[f.sample];
  attack::AttackConfig config = c.attack.attack_config(input.joints());
  config.kappa = objective.kappa;
  config.target = objective.target.fit_length(input.frames());
  const attack::AttackResult result = attack::run_attack(*s.model, input, config);

  Json doc = attack::attack_result_to_json(result, config, input);
  doc["objective"] = objective.label;
  doc["sample"] = f.sample;
  doc["input_category"] = data::category_name(s.test[f.sample].category);

  const fs::path dir = f.out;
  ArtifactLock lock(dir);
  write_text(dir / "attack_result.json", doc.dump(1) + "\n");
  m.outputs = {"attack_result.json"};
  finish_manifest(dir, m);
  out << "objective " << objective.label << ", sample " << f.sample << ": "
      << (result.success ? "success" : "failure") << " (distance sum "
      << format_double(result.distance_sum) << ", kappa " << format_double(objective.kappa)
      << ")\n";
  return 0;
}

int cmd_eval(const CLI::App* cmd, const Flags& f, std::ostream& out) {
  const RunConfig c = resolve_config(cmd, f);
  RunManifest m = start_manifest("eval", c);
  m.inputs["checkpoint"] = absolute_string(f.checkpoint);
  m.inputs["data"] = absolute_string(f.data);

  EvalSetup s = prepare_eval(cmd, f, c);
  eval::SweepOptions options;
  options.epsilons = c.eval.epsilons;
  options.base = c.attack.attack_config(s.inputs.front().joints());
  options.threads = c.eval.threads;
  const std::string model_id =
      f.model_id.empty() ? std::string(models::architecture_name(s.model->architecture()))
                         : f.model_id;
  const eval::SuccessReport report =
      eval::whitebox_sweep(*s.model, model_id, s.inputs, s.objectives, options);

  const fs::path dir = f.out;
  ArtifactLock lock(dir);
  write_text(dir / "report.csv", eval::report_csv(report));
  write_text(dir / "summary.json", eval::report_summary(report).dump(2) + "\n");
  write_text(dir / "report.json", eval::report_to_json(report).dump() + "\n");
  write_text(dir / "objectives.json", eval::objectives_to_json(s.objectives).dump() + "\n");
  m.outputs = {"report.csv", "summary.json", "report.json", "objectives.json"};
  finish_manifest(dir, m);
  out << model_id << ": " << s.inputs.size() << " inputs x " << s.objectives.size()
      << " objectives\n";
  for (std::size_t e = 0; e < report.epsilons.size(); ++e) {
    out << "  epsilon " << format_double(report.epsilons[e]) << ": success rate "
        << format_double(report.overall_rate(e)) << "\n";
  }
  return 0;
}

int cmd_transfer(const CLI::App* cmd, const Flags& f, std::ostream& out) {
  const RunConfig c = resolve_config(cmd, f);
  RunManifest m = start_manifest("transfer", c);

  struct Source {
    eval::SuccessReport report;
    std::vector<eval::Objective> objectives;
    std::unique_ptr<models::SequenceRegressor> model;
  };
  std::vector<Source> sources;
  for (std::size_t i = 0; i < f.sources.size(); ++i) {
    const fs::path dir = f.sources[i];
    const RunManifest produced = read_manifest(dir);
    if (produced.command != "eval") {
      throw Error(ErrorKind::kInvalidArgument,
                  dir.string() + " was written by '" + produced.command + "', not 'eval'");
    }
    const auto ckpt = produced.inputs.find("checkpoint");
    if (ckpt == produced.inputs.end()) {
      throw Error(ErrorKind::kFormat, dir.string() + ": manifest names no checkpoint");
    }
    Source s;
    s.report = eval::report_from_json(read_json(dir / "report.json"));
    s.objectives = eval::objectives_from_json(read_json(dir / "objectives.json"));
    s.model = models::load_model(ckpt->second);
    m.inputs["source" + std::to_string(i)] = absolute_string(dir.string());
    sources.push_back(std::move(s));
  }

  eval::TransferMatrix matrix;
  for (const Source& from : sources) {
    for (const Source& to : sources) {
      matrix.push_back(eval::blackbox_transfer(from.report, *to.model, to.report.model_id,
                                               from.objectives, c.eval.threads));
    }
  }

  const fs::path dir = f.out;
  ArtifactLock lock(dir);
  write_text(dir / "transfer.csv", eval::transfer_csv(matrix));
  write_text(dir / "transfer_summary.json", eval::transfer_summary(matrix).dump(2) + "\n");
  m.outputs = {"transfer.csv", "transfer_summary.json"};
  finish_manifest(dir, m);
  for (const auto& entry : matrix) {
    out << entry.source << " -> " << entry.receiver << ":";
    for (std::size_t e = 0; e < entry.epsilons.size(); ++e) {
      out << " " << format_double(entry.overall_rate(e));
    }
    out << "\n";
  }
  return 0;
}

void append_frames(std::string& csv, const std::string& name,
                   const data::SkeletonSequence& seq) {
  for (std::size_t t = 0; t < seq.frames(); ++t) {
    for (std::size_t j = 0; j < seq.joints(); ++j) {
      csv += name + "," + std::to_string(t) + "," + std::to_string(j);
      for (data::Coord coord : {data::Coord::kX, data::Coord::kY, data::Coord::kDepth}) {
        csv += "," + format_double(seq.at(t, j, coord));
      }
      csv += "\n";
    }
  }
}

int cmd_export(const CLI::App* cmd, const Flags& f, std::ostream& out) {
  const RunConfig c = resolve_config(cmd, f);
  RunManifest m = start_manifest("export", c);
  std::string csv = "sequence,frame,joint,x,y,depth\n";
  if (f.attack_result.empty() && f.data.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "export needs --data or --attack-result");
  }
  if (!f.attack_result.empty()) {
    m.inputs["attack_result"] = absolute_string(f.attack_result);
    const Json doc = read_json(f.attack_result);
    try {
      const std::size_t joints = doc.at("joints").get<std::size_t>();
      for (const char* name :
           {"input", "adversarial", "target", "natural_output", "adversarial_output"}) {
        append_frames(csv, name, data::sequence_from_json(doc.at(name), joints));
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::kFormat, f.attack_result + ": " + e.what());
    }
  } else {
    m.inputs["data"] = absolute_string(f.data);
    const auto records = data::load_records(f.data);
    if (f.record >= records.size()) {
      throw Error(ErrorKind::kInvalidArgument,
                  "record " + std::to_string(f.record) + " out of range, " + f.data +
                      " has " + std::to_string(records.size()));
    }
    append_frames(csv, "actor", records[f.record].actor);
    append_frames(csv, "reactor", records[f.record].reactor);
  }
  const fs::path dir = f.out;
  ArtifactLock lock(dir);
  write_text(dir / "frames.csv", csv);
  m.outputs = {"frames.csv"};
  finish_manifest(dir, m);
  out << "wrote " << (dir / "frames.csv").string() << "\n";
  return 0;
}

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "JSON config file")->check(CLI::ExistingFile);
  cmd->add_option("--seed", f.seed, "seed for data, initialization and target choice");
  cmd->add_option("--out", f.out, "artifact directory")->required();
}

void add_model_flag(CLI::App* cmd, Flags& f) {
  cmd->add_option("--model", f.model, "architecture")->check(CLI::IsMember({"tcn", "gru"}));
}

void add_attack_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--checkpoint", f.checkpoint, "trained model file")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--data", f.data, "dataset file or SBU directory")
      ->required()
      ->check(CLI::ExistingPath);
  cmd->add_option("--objective", f.objective, "target reaction label");
  cmd->add_option("--alpha", f.alpha, "sign step size");
  cmd->add_option("--steps", f.steps, "iterations per attack");
  cmd->add_option("--lambda", f.lambda, "temporal loss weight in [0, 1]");
  cmd->add_option("--update-rule", f.update_rule, "pgd or adam")
      ->check(CLI::IsMember({"pgd", "adam"}));
  cmd->add_option("--adam-lr", f.adam_learning_rate, "Adam step size for the adam rule");
  cmd->add_option("--mask", f.mask, "perturbed coordinates")
      ->check(CLI::IsMember({"depth", "all"}));
  cmd->add_option("--kappa-mode", f.kappa_mode, "survey table or natural-distance percentile")
      ->check(CLI::IsMember({"survey", "percentile"}));
  cmd->add_option("--kappa-percentile", f.kappa_percentile, "percentile for --kappa-mode percentile");
  add_model_flag(cmd, f);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Adversarial interaction attacks on skeleton reaction regressors", "aia"};
  app.require_subcommand(1);
  app.set_version_flag("--version", tool_version());
  Flags f;

  CLI::App* synth = app.add_subcommand("synth", "generate a synthetic interaction dataset");
  add_common(synth, f);
  synth->add_option("--per-category", f.per_category, "records per category");
  synth->add_option("--frames", f.frames, "frames per sequence");
  synth->add_option("--joints", f.joints, "joints per skeleton");

  CLI::App* train = app.add_subcommand("train", "train a reaction regressor");
  add_common(train, f);
  train->add_option("--data", f.data, "dataset file or SBU directory")
      ->required()
      ->check(CLI::ExistingPath);
  add_model_flag(train, f);
  train->add_option("--preset", f.preset, "model size")->check(CLI::IsMember({"tiny", "full"}));
  train->add_option("--epochs", f.epochs, "training epochs");
  train->add_option("--lr", f.learning_rate, "Adam learning rate");
  train->add_option("--batch-size", f.batch_size, "pairs per step, 0 for full batch");

  CLI::App* attack = app.add_subcommand("attack", "attack one held-out input");
  add_common(attack, f);
  add_attack_flags(attack, f);
  attack->add_option("--epsilon", f.epsilons, "perturbation budget")->expected(1);
  attack->add_option("--sample", f.sample, "index into the held-out inputs");

  CLI::App* evaluate = app.add_subcommand("eval", "white-box success rates over an epsilon grid");
  add_common(evaluate, f);
  add_attack_flags(evaluate, f);
  evaluate->add_option("--epsilon", f.epsilons, "perturbation budgets")->expected(1, 64);
  evaluate->add_option("--model-id", f.model_id, "name used in reports");
  evaluate->add_option("--threads", f.threads, "worker threads");

  CLI::App* transfer = app.add_subcommand("transfer", "replay eval results across models");
  add_common(transfer, f);
  transfer->add_option("--source", f.sources, "eval artifact directory (repeatable)")
      ->required()
      ->check(CLI::ExistingDirectory);
  transfer->add_option("--threads", f.threads, "worker threads");

  CLI::App* exp = app.add_subcommand("export", "per-frame coordinates for plotting");
  add_common(exp, f);
  auto* data_opt = exp->add_option("--data", f.data, "dataset file or SBU directory")
                       ->check(CLI::ExistingPath);
  exp->add_option("--record", f.record, "record index for --data");
  auto* result_opt = exp->add_option("--attack-result", f.attack_result, "attack_result.json")
                         ->check(CLI::ExistingFile);
  data_opt->excludes(result_opt);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (synth->parsed()) return cmd_synth(synth, f, out);
    if (train->parsed()) return cmd_train(train, f, out);
    if (attack->parsed()) return cmd_attack(attack, f, out);
    if (evaluate->parsed()) return cmd_eval(evaluate, f, out);
    if (transfer->parsed()) return cmd_transfer(transfer, f, out);
    if (exp->parsed()) return cmd_export(exp, f, out);
  } catch (const std::exception& e) {
    err << "aia: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace aia::cli
