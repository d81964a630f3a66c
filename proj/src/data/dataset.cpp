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

#include "aia/data/dataset.hpp"

#include <fstream>
#include <sstream>

#include "aia/data/sbu.hpp"
#include "aia/error.hpp"

namespace aia::data {

namespace {

constexpr const char* kDatasetFormat = "aia-dataset";
constexpr int kDatasetVersion = 1;

}  // namespace

std::array<SequencePair, 2> make_pairs(const InteractionRecord& record) {
  return {SequencePair{record.actor, record.reactor, record.category},
          SequencePair{record.reactor, record.actor, record.category}};
}

DatasetSplit split_by_sets(std::span<const InteractionRecord> records,
                           const std::set<std::string>& held_out) {
  DatasetSplit split;
  for (const InteractionRecord& r : records) {
    if (r.set_id.empty()) {
      throw Error(ErrorKind::kInvalidArgument, "split_by_sets: record without set id");
    }
    auto& side = held_out.contains(r.set_id) ? split.test : split.train;
    for (auto& pair : make_pairs(r)) side.push_back(std::move(pair));
  }
  if (split.train.empty()) {
    throw Error(ErrorKind::kInvalidArgument,
                "split_by_sets: held-out sets cover every record, train is empty");
  }
  if (split.test.empty()) {
    throw Error(ErrorKind::kInvalidArgument,
                "split_by_sets: no record belongs to a held-out set, test is empty");
  }
  return split;
}

std::vector<InteractionRecord> held_out_records(std::span<const InteractionRecord> records,
                                                const std::set<std::string>& held_out) {
  std::vector<InteractionRecord> out;
  for (const InteractionRecord& r : records) {
    if (held_out.contains(r.set_id)) out.push_back(r);
  }
  return out;
}

Json sequence_to_json(const SkeletonSequence& seq) {
  Json frames = Json::array();
  for (std::size_t t = 0; t < seq.frames(); ++t) {
    const auto f = seq.frame(t);
    frames.push_back(Json(std::vector<double>(f.begin(), f.end())));
  }
  return frames;
}

SkeletonSequence sequence_from_json(const Json& frames, std::size_t joints) {
  if (!frames.is_array() || frames.empty()) {
    throw Error(ErrorKind::kFormat, "sequence must be a non-empty array of frames");
  }
  const std::size_t dim = joints * kCoordsPerJoint;
  std::vector<double> values;
  values.reserve(frames.size() * dim);
  for (std::size_t t = 0; t < frames.size(); ++t) {
    const Json& f = frames[t];
    if (!f.is_array() || f.size() != dim) {
      throw Error(ErrorKind::kFormat, "frame " + std::to_string(t + 1) +
                                          " must hold " + std::to_string(dim) +
                                          " numbers");
    }
    for (const Json& v : f) {
      if (!v.is_number()) {
        throw Error(ErrorKind::kFormat,
                    "frame " + std::to_string(t + 1) + " has a non-numeric value");
      }
      values.push_back(v.get<double>());
    }
  }
  return SkeletonSequence(frames.size(), joints, std::move(values));
}

Json records_to_json(std::span<const InteractionRecord> records) {
  Json doc;
  doc["format"] = kDatasetFormat;
  doc["version"] = kDatasetVersion;
  doc["joints"] = records.empty() ? kDefaultJoints : records.front().actor.joints();
  Json list = Json::array();
  for (const InteractionRecord& r : records) {
    Json rec;
    rec["category"] = std::string(category_name(r.category));
    rec["set_id"] = r.set_id;
    rec["actor"] = sequence_to_json(r.actor);
    rec["reactor"] = sequence_to_json(r.reactor);
    list.push_back(std::move(rec));
  }
  doc["records"] = std::move(list);
  return doc;
}

std::vector<InteractionRecord> records_from_json(const Json& doc) {
  try {
    if (doc.value("format", "") != kDatasetFormat) {
      throw Error(ErrorKind::kFormat, "not an aia-dataset document");
    }
    if (doc.at("version").get<int>() != kDatasetVersion) {
      throw Error(ErrorKind::kFormat, "unsupported dataset version " +
                                          doc.at("version").dump());
    }
    const auto joints = doc.at("joints").get<std::size_t>();
    std::vector<InteractionRecord> records;
    for (const Json& rec : doc.at("records")) {
      InteractionRecord r;
      const auto name = rec.at("category").get<std::string>();
      const auto cat = parse_category(name);
      if (!cat) throw Error(ErrorKind::kFormat, "unknown category '" + name + "'");
      r.category = *cat;
      r.set_id = rec.at("set_id").get<std::string>();
      r.actor = sequence_from_json(rec.at("actor"), joints);
      r.reactor = sequence_from_json(rec.at("reactor"), joints);
      if (r.actor.frames() != r.reactor.frames()) {
        throw Error(ErrorKind::kFormat, "record " + r.set_id +
                                            ": actor and reactor lengths differ");
      }
      records.push_back(std::move(r));
    }
    return records;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kFormat, std::string("dataset: ") + e.what());
  }
}

void save_records(const std::filesystem::path& path,
                  std::span<const InteractionRecord> records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  out << records_to_json(records).dump(1) << '\n';
  if (!out) throw Error(ErrorKind::kIo, "write failed: " + path.string());
}

std::vector<InteractionRecord> load_records(const std::filesystem::path& path) {
  if (std::filesystem::is_directory(path)) return load_sbu_tree(path);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kFormat, path.string() + ": " + e.what());
  }
  return records_from_json(doc);
}

}  // namespace aia::data
