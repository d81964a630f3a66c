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

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace aia::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* kManifestName = "manifest.json";
inline constexpr const char* kLockName = ".aia.lock";

// Provenance of one artifact directory.
struct RunManifest {
  std::string command;
  Json config;
  std::uint64_t seed = 0;
  // Role -> path of every file the command read.
  std::map<std::string, std::string> inputs;
  // File names written next to the manifest.
  std::vector<std::string> outputs;
  std::string tool_version;
  std::string started_at;
  std::string finished_at;
};

const char* tool_version();

// UTC, ISO 8601, second resolution.
std::string utc_timestamp();

Json manifest_to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const Json& doc);

void write_manifest(const std::filesystem::path& dir, const RunManifest& manifest);
RunManifest read_manifest(const std::filesystem::path& dir);

// Exclusive claim on an artifact directory for the lifetime of the object.
// Creating a second lock on the same directory fails with an io error.
class ArtifactLock {
 public:
  explicit ArtifactLock(const std::filesystem::path& dir);
  ~ArtifactLock();

  ArtifactLock(const ArtifactLock&) = delete;
  ArtifactLock& operator=(const ArtifactLock&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace aia::cli
