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

#include "aia/models/checkpoint.hpp"

#include <fstream>

#include "aia/error.hpp"

namespace aia::models {

namespace {

constexpr const char* kCheckpointFormat = "aia-checkpoint";

}  // namespace

Json model_to_json(const SequenceRegressor& model) {
  Json doc;
  doc["format"] = kCheckpointFormat;
  doc["version"] = kCheckpointVersion;
  doc["architecture"] = std::string(architecture_name(model.architecture()));
  doc["config"] = config_to_json(model.config());
  Json params = Json::array();
  for (const auto& p : model.parameters()) {
    Json entry;
    entry["name"] = p.name;
    entry["shape"] = p.value.shape();
    entry["data"] = p.value.values();
    params.push_back(std::move(entry));
  }
  doc["parameters"] = std::move(params);
  return doc;
}

std::unique_ptr<SequenceRegressor> model_from_json(const Json& doc,
                                                   std::optional<Architecture> expected) {
  try {
    if (!doc.is_object() || doc.value("format", "") != kCheckpointFormat) {
      throw Error(ErrorKind::kFormat, "checkpoint: not an aia-checkpoint document");
    }
    const int version = doc.at("version").get<int>();
    if (version != kCheckpointVersion) {
      throw Error(ErrorKind::kFormat, "checkpoint: unsupported version " +
                                          std::to_string(version));
    }
    const auto arch_name = doc.at("architecture").get<std::string>();
    const auto arch = parse_architecture(arch_name);
    if (!arch) {
      throw Error(ErrorKind::kFormat, "checkpoint: unknown architecture '" + arch_name + "'");
    }
    if (expected && *expected != *arch) {
      throw Error(ErrorKind::kArchitecture,
                  "checkpoint holds a " + arch_name + " model, expected " +
                      std::string(architecture_name(*expected)));
    }
    auto model = make_model(config_from_json(*arch, doc.at("config")), 0);
    const Json& params = doc.at("parameters");
    auto& slots = model->parameters();
    if (!params.is_array() || params.size() != slots.size()) {
      throw Error(ErrorKind::kFormat, "checkpoint: expected " +
                                          std::to_string(slots.size()) + " parameters");
    }
    for (std::size_t i = 0; i < slots.size(); ++i) {
      const Json& entry = params[i];
      const auto name = entry.at("name").get<std::string>();
      if (name != slots[i].name) {
        throw Error(ErrorKind::kFormat, "checkpoint: parameter " + std::to_string(i) +
                                            " is '" + name + "', expected '" +
                                            slots[i].name + "'");
      }
      const auto shape = entry.at("shape").get<diff::Shape>();
      if (shape != slots[i].value.shape()) {
        throw Error(ErrorKind::kFormat, "checkpoint: parameter '" + name + "' has shape " +
                                            diff::shape_string(shape) + ", config implies " +
                                            diff::shape_string(slots[i].value.shape()));
      }
      diff::NdArray value(shape, entry.at("data").get<std::vector<double>>());
      if (!value.all_finite()) {
        throw Error(ErrorKind::kFormat, "checkpoint: parameter '" + name +
                                            "' holds non-finite values");
      }
      slots[i].value = std::move(value);
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kFormat, std::string("checkpoint: ") + e.what());
  } catch (const ShapeError& e) {
    throw Error(ErrorKind::kFormat, std::string("checkpoint: ") + e.what());
  }
}

void save_model(const SequenceRegressor& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  out << model_to_json(model).dump() << '\n';
  if (!out) throw Error(ErrorKind::kIo, "write failed: " + path.string());
}

std::unique_ptr<SequenceRegressor> load_model(const std::filesystem::path& path,
                                              std::optional<Architecture> expected) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kFormat, path.string() + ": " + e.what());
  }
  return model_from_json(doc, expected);
}

}  // namespace aia::models
