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

#include "aia/eval/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>

#include "aia/attack/losses.hpp"
#include "aia/data/dataset.hpp"
#include "aia/error.hpp"
#include "aia/rng.hpp"

namespace aia::eval {

using data::SkeletonSequence;

namespace {

// Runs body(i) for i in [0, n) on up to `threads` workers. Each index writes
// its own slot, so results do not depend on scheduling.
template <typename Body>
void parallel_for(std::size_t n, std::size_t threads, Body&& body) {
  threads = std::max<std::size_t>(1, std::min(threads, n));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            body(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

template <typename T>
CellGrid<T> make_grid(std::size_t objectives, std::size_t epsilons, std::size_t samples) {
  return CellGrid<T>(objectives, std::vector<std::vector<T>>(epsilons, std::vector<T>(samples)));
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

double grid_rate(const CellGrid<std::uint8_t>& flags, std::size_t o, std::size_t e) {
  const auto& cell = flags.at(o).at(e);
  if (cell.empty()) return 0.0;
  const auto hits = static_cast<double>(std::count(cell.begin(), cell.end(), 1));
  return hits / static_cast<double>(cell.size());
}

double grid_overall(const CellGrid<std::uint8_t>& flags, std::size_t e) {
  if (flags.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t o = 0; o < flags.size(); ++o) total += grid_rate(flags, o, e);
  return total / static_cast<double>(flags.size());
}

}  // namespace

std::vector<Objective> build_objectives(std::span<const data::InteractionRecord> preferred,
                                        std::span<const data::InteractionRecord> fallback,
                                        const ToleranceTable& table, std::uint64_t seed) {
  UnitRng rng(seed);
  std::vector<Objective> objectives;
  for (data::Category c : data::kAllCategories) {
    std::vector<const data::InteractionRecord*> pool;
    for (const auto& r : preferred) {
      if (r.category == c) pool.push_back(&r);
    }
    if (pool.empty()) {
      for (const auto& r : fallback) {
        if (r.category == c) pool.push_back(&r);
      }
    }
    const std::string label(data::category_name(c));
    if (pool.empty()) continue;
    const auto* pick = pool[rng.index(pool.size())];
    objectives.push_back(Objective{label, pick->reactor, table.resolve(label)});
  }
  if (objectives.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "build_objectives: no records to draw targets from");
  }
  return objectives;
}

std::vector<double> natural_distances(const models::SequenceRegressor& model,
                                      std::span<const SkeletonSequence> inputs,
                                      const Objective& objective) {
  std::vector<double> out;
  out.reserve(inputs.size());
  for (const auto& x : inputs) {
    out.push_back(attack::distance_sum(model.predict(x),
                                       objective.target.fit_length(x.frames())));
  }
  return out;
}

void assign_percentile_kappas(const models::SequenceRegressor& model,
                              std::span<const SkeletonSequence> inputs,
                              std::vector<Objective>& objectives, double q) {
  for (auto& objective : objectives) {
    objective.kappa = percentile(natural_distances(model, inputs, objective), q);
  }
}

std::size_t SuccessReport::successes(std::size_t objective, std::size_t epsilon) const {
  const auto& cell = flags.at(objective).at(epsilon);
  return static_cast<std::size_t>(std::count(cell.begin(), cell.end(), 1));
}

double SuccessReport::rate(std::size_t objective, std::size_t epsilon) const {
  return grid_rate(flags, objective, epsilon);
}

double SuccessReport::overall_rate(std::size_t epsilon) const {
  return grid_overall(flags, epsilon);
}

double TransferEntry::rate(std::size_t objective, std::size_t epsilon) const {
  return grid_rate(flags, objective, epsilon);
}

double TransferEntry::overall_rate(std::size_t epsilon) const {
  return grid_overall(flags, epsilon);
}

SuccessReport whitebox_sweep(const models::SequenceRegressor& model,
                             const std::string& model_id,
                             std::span<const SkeletonSequence> inputs,
                             std::span<const Objective> objectives,
                             const SweepOptions& options) {
  if (inputs.empty()) throw Error(ErrorKind::kInvalidArgument, "whitebox_sweep: no inputs");
  if (objectives.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "whitebox_sweep: no objectives");
  }
  if (options.epsilons.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "whitebox_sweep: empty epsilon grid");
  }
  SuccessReport report;
  report.model_id = model_id;
  report.epsilons = options.epsilons;
  report.samples = inputs.size();
  for (const auto& o : objectives) {
    report.objectives.push_back(o.label);
    report.kappas.push_back(o.kappa);
  }
  const std::size_t n_obj = objectives.size();
  const std::size_t n_eps = options.epsilons.size();
  const std::size_t n_in = inputs.size();
  report.flags = make_grid<std::uint8_t>(n_obj, n_eps, n_in);
  report.distance_sums = make_grid<double>(n_obj, n_eps, n_in);
  report.adversarial = make_grid<SkeletonSequence>(n_obj, n_eps, n_in);

  parallel_for(n_obj * n_eps * n_in, options.threads, [&](std::size_t cell) {
    const std::size_t s = cell % n_in;
    const std::size_t e = (cell / n_in) % n_eps;
    const std::size_t o = cell / (n_in * n_eps);
    attack::AttackConfig cfg = options.base;
    cfg.epsilon = options.epsilons[e];
    cfg.kappa = objectives[o].kappa;
    cfg.target = objectives[o].target.fit_length(inputs[s].frames());
    const attack::AttackResult r = attack::run_attack(model, inputs[s], cfg);
    report.flags[o][e][s] = r.success ? 1 : 0;
    report.distance_sums[o][e][s] = r.distance_sum;
    report.adversarial[o][e][s] = r.adversarial;
  });
  return report;
}

TransferEntry blackbox_transfer(const SuccessReport& source,
                                const models::SequenceRegressor& receiver,
                                const std::string& receiver_id,
                                std::span<const Objective> objectives,
                                std::size_t threads) {
  if (objectives.size() != source.objectives.size()) {
    throw Error(ErrorKind::kInvalidArgument,
                "blackbox_transfer: objective count differs from the source report");
  }
  for (std::size_t o = 0; o < objectives.size(); ++o) {
    if (objectives[o].label != source.objectives[o]) {
      throw Error(ErrorKind::kInvalidArgument,
                  "blackbox_transfer: objective " + std::to_string(o) + " is '" +
                      objectives[o].label + "' but the source report has '" +
                      source.objectives[o] + "'");
    }
  }
  TransferEntry entry;
  entry.source = source.model_id;
  entry.receiver = receiver_id;
  entry.objectives = source.objectives;
  entry.epsilons = source.epsilons;
  entry.samples = source.samples;
  const std::size_t n_obj = source.objectives.size();
  const std::size_t n_eps = source.epsilons.size();
  const std::size_t n_in = source.samples;
  entry.flags = make_grid<std::uint8_t>(n_obj, n_eps, n_in);
  for (const auto& per_obj : source.adversarial) {
    for (const auto& per_eps : per_obj) {
      for (const auto& seq : per_eps) {
        if (seq.feature_dim() != receiver.feature_dim()) {
          throw ShapeError("blackbox_transfer: sequences have " +
                           std::to_string(seq.feature_dim()) + " features, receiver expects " +
                           std::to_string(receiver.feature_dim()));
        }
      }
    }
  }
  parallel_for(n_obj * n_eps * n_in, threads, [&](std::size_t cell) {
    const std::size_t s = cell % n_in;
    const std::size_t e = (cell / n_in) % n_eps;
    const std::size_t o = cell / (n_in * n_eps);
    const SkeletonSequence& adv = source.adversarial[o][e][s];
    const double d = attack::distance_sum(receiver.predict(adv),
                                          objectives[o].target.fit_length(adv.frames()));
    entry.flags[o][e][s] = d < objectives[o].kappa ? 1 : 0;
  });
  return entry;
}

std::string report_csv(const SuccessReport& report) {
  std::string out = "model,objective,kappa,epsilon,successes,samples,success_rate\n";
  for (std::size_t o = 0; o < report.objectives.size(); ++o) {
    for (std::size_t e = 0; e < report.epsilons.size(); ++e) {
      out += report.model_id + "," + report.objectives[o] + "," +
             format_number(report.kappas[o]) + "," + format_number(report.epsilons[e]) +
             "," + std::to_string(report.successes(o, e)) + "," +
             std::to_string(report.samples) + "," + format_number(report.rate(o, e)) + "\n";
    }
  }
  for (std::size_t e = 0; e < report.epsilons.size(); ++e) {
    out += report.model_id + ",all,," + format_number(report.epsilons[e]) + ",," +
           std::to_string(report.samples) + "," + format_number(report.overall_rate(e)) +
           "\n";
  }
  return out;
}

std::string transfer_csv(const TransferMatrix& matrix) {
  std::string out = "source,receiver,objective,epsilon,successes,samples,success_rate\n";
  for (const auto& entry : matrix) {
    for (std::size_t o = 0; o < entry.objectives.size(); ++o) {
      for (std::size_t e = 0; e < entry.epsilons.size(); ++e) {
        const auto& cell = entry.flags[o][e];
        const auto hits = std::count(cell.begin(), cell.end(), 1);
        out += entry.source + "," + entry.receiver + "," + entry.objectives[o] + "," +
               format_number(entry.epsilons[e]) + "," + std::to_string(hits) + "," +
               std::to_string(entry.samples) + "," + format_number(entry.rate(o, e)) + "\n";
      }
    }
    for (std::size_t e = 0; e < entry.epsilons.size(); ++e) {
      out += entry.source + "," + entry.receiver + ",all," +
             format_number(entry.epsilons[e]) + ",," + std::to_string(entry.samples) + "," +
             format_number(entry.overall_rate(e)) + "\n";
    }
  }
  return out;
}

Json report_summary(const SuccessReport& report) {
  Json doc;
  doc["model"] = report.model_id;
  doc["samples"] = report.samples;
  doc["epsilons"] = report.epsilons;
  Json objectives = Json::array();
  for (std::size_t o = 0; o < report.objectives.size(); ++o) {
    Json row;
    row["objective"] = report.objectives[o];
    row["kappa"] = report.kappas[o];
    std::vector<double> rates;
    for (std::size_t e = 0; e < report.epsilons.size(); ++e) rates.push_back(report.rate(o, e));
    row["success_rate"] = rates;
    objectives.push_back(std::move(row));
  }
  doc["objectives"] = std::move(objectives);
  std::vector<double> overall;
  for (std::size_t e = 0; e < report.epsilons.size(); ++e) {
    overall.push_back(report.overall_rate(e));
  }
  doc["overall_success_rate"] = overall;
  return doc;
}

Json transfer_summary(const TransferMatrix& matrix) {
  Json doc = Json::array();
  for (const auto& entry : matrix) {
    Json row;
    row["source"] = entry.source;
    row["receiver"] = entry.receiver;
    row["epsilons"] = entry.epsilons;
    std::vector<double> overall;
    for (std::size_t e = 0; e < entry.epsilons.size(); ++e) {
      overall.push_back(entry.overall_rate(e));
    }
    row["overall_success_rate"] = overall;
    doc.push_back(std::move(row));
  }
  return doc;
}

Json report_to_json(const SuccessReport& report) {
  Json doc;
  doc["format"] = "aia-sweep";
  doc["version"] = 1;
  doc["model"] = report.model_id;
  doc["objectives"] = report.objectives;
  doc["kappas"] = report.kappas;
  doc["epsilons"] = report.epsilons;
  doc["samples"] = report.samples;
  Json cells = Json::array();
  for (std::size_t o = 0; o < report.objectives.size(); ++o) {
    for (std::size_t e = 0; e < report.epsilons.size(); ++e) {
      for (std::size_t s = 0; s < report.samples; ++s) {
        Json c;
        c["objective"] = o;
        c["epsilon"] = e;
        c["sample"] = s;
        c["success"] = report.flags[o][e][s] == 1;
        c["distance_sum"] = report.distance_sums[o][e][s];
        c["joints"] = report.adversarial[o][e][s].joints();
        c["adversarial"] = data::sequence_to_json(report.adversarial[o][e][s]);
        cells.push_back(std::move(c));
      }
    }
  }
  doc["cells"] = std::move(cells);
  return doc;
}

SuccessReport report_from_json(const Json& doc) {
  try {
    if (doc.value("format", "") != "aia-sweep" || doc.at("version").get<int>() != 1) {
      throw Error(ErrorKind::kFormat, "not an aia-sweep v1 document");
    }
    SuccessReport r;
    r.model_id = doc.at("model").get<std::string>();
    r.objectives = doc.at("objectives").get<std::vector<std::string>>();
    r.kappas = doc.at("kappas").get<std::vector<double>>();
    r.epsilons = doc.at("epsilons").get<std::vector<double>>();
    r.samples = doc.at("samples").get<std::size_t>();
    const std::size_t n_obj = r.objectives.size();
    const std::size_t n_eps = r.epsilons.size();
    r.flags = make_grid<std::uint8_t>(n_obj, n_eps, r.samples);
    r.distance_sums = make_grid<double>(n_obj, n_eps, r.samples);
    r.adversarial = make_grid<SkeletonSequence>(n_obj, n_eps, r.samples);
    const Json& cells = doc.at("cells");
    if (cells.size() != n_obj * n_eps * r.samples) {
      throw Error(ErrorKind::kFormat, "sweep: cell count does not match the grid");
    }
    for (const Json& c : cells) {
      const auto o = c.at("objective").get<std::size_t>();
      const auto e = c.at("epsilon").get<std::size_t>();
      const auto s = c.at("sample").get<std::size_t>();
      if (o >= n_obj || e >= n_eps || s >= r.samples) {
        throw Error(ErrorKind::kFormat, "sweep: cell index out of range");
      }
      r.flags[o][e][s] = c.at("success").get<bool>() ? 1 : 0;
      r.distance_sums[o][e][s] = c.at("distance_sum").get<double>();
      r.adversarial[o][e][s] =
          data::sequence_from_json(c.at("adversarial"), c.at("joints").get<std::size_t>());
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kFormat, std::string("sweep: ") + e.what());
  }
}

Json objectives_to_json(std::span<const Objective> objectives) {
  Json doc = Json::array();
  for (const auto& o : objectives) {
    Json j;
    j["label"] = o.label;
    j["kappa"] = o.kappa;
    j["joints"] = o.target.joints();
    j["target"] = data::sequence_to_json(o.target);
    doc.push_back(std::move(j));
  }
  return doc;
}

std::vector<Objective> objectives_from_json(const Json& doc) {
  try {
    std::vector<Objective> out;
    for (const Json& j : doc) {
      out.push_back(Objective{
          j.at("label").get<std::string>(),
          data::sequence_from_json(j.at("target"), j.at("joints").get<std::size_t>()),
          j.at("kappa").get<double>()});
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kFormat, std::string("objectives: ") + e.what());
  }
}

}  // namespace aia::eval
