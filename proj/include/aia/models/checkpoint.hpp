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

#include <filesystem>
#include <memory>
#include <optional>

#include "aia/models/regressor.hpp"

namespace aia::models {

inline constexpr int kCheckpointVersion = 1;

// {"format": "aia-checkpoint", "version": 1, "architecture": "tcn"|"gru",
//  "config": {...}, "parameters": [{"name", "shape", "data"}...]}
Json model_to_json(const SequenceRegressor& model);
std::unique_ptr<SequenceRegressor> model_from_json(
    const Json& doc, std::optional<Architecture> expected = std::nullopt);

void save_model(const SequenceRegressor& model, const std::filesystem::path& path);
std::unique_ptr<SequenceRegressor> load_model(
    const std::filesystem::path& path,
    std::optional<Architecture> expected = std::nullopt);

}  // namespace aia::models
