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
#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "aia/data/skeleton.hpp"

namespace aia::data {

using Json = nlohmann::ordered_json;

inline const std::set<std::string> kDefaultHeldOutSets = {
    "s01s02", "s03s04", "s05s02", "s06s04"};

// [(actor, reactor), (reactor, actor)].
std::array<SequencePair, 2> make_pairs(const InteractionRecord& record);

// Records whose set id is held out become test pairs, the rest train pairs.
// Throws if either side ends up empty.
DatasetSplit split_by_sets(std::span<const InteractionRecord> records,
                           const std::set<std::string>& held_out = kDefaultHeldOutSets);

// Records whose set id is in `held_out`, in input order.
std::vector<InteractionRecord> held_out_records(
    std::span<const InteractionRecord> records,
    const std::set<std::string>& held_out = kDefaultHeldOutSets);

// Interchange format:
//   {"format": "aia-dataset", "version": 1, "joints": N,
//    "records": [{"category", "set_id", "actor": [[3N]...], "reactor": ...}]}
Json sequence_to_json(const SkeletonSequence& seq);
SkeletonSequence sequence_from_json(const Json& frames, std::size_t joints);

Json records_to_json(std::span<const InteractionRecord> records);
std::vector<InteractionRecord> records_from_json(const Json& doc);

void save_records(const std::filesystem::path& path,
                  std::span<const InteractionRecord> records);
// A directory is read as an SBU tree, anything else as an interchange file.
std::vector<InteractionRecord> load_records(const std::filesystem::path& path);

}  // namespace aia::data
