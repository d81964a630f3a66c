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


#include "aia/cli/manifest.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <system_error>

#include "aia/error.hpp"

#ifndef AIA_VERSION
#define AIA_VERSION "0.0.0"
#endif

namespace aia::cli {

const char* tool_version() { return AIA_VERSION; }

std::string utc_timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Json manifest_to_json(const RunManifest& m) {
  Json doc;
  doc["format"] = "aia-manifest";
  doc["version"] = 1;
  doc["command"] = m.command;
  doc["tool_version"] = m.tool_version;
  doc["seed"] = m.seed;
  doc["inputs"] = Json::object();
  for (const auto& [role, path] : m.inputs) doc["inputs"][role] = path;
  doc["outputs"] = m.outputs;
  doc["config"] = m.config;
  doc["started_at"] = m.started_at;
  doc["finished_at"] = m.finished_at;
  return doc;
}

RunManifest manifest_from_json(const Json& doc) {
  try {
    if (doc.at("format") != "aia-manifest") {
      throw Error(ErrorKind::kFormat, "not a run manifest");
    }
    RunManifest m;
    m.command = doc.at("command").get<std::string>();
    m.tool_version = doc.at("tool_version").get<std::string>();
    m.seed = doc.at("seed").get<std::uint64_t>();
    for (auto it = doc.at("inputs").begin(); it != doc.at("inputs").end(); ++it) {
      m.inputs[it.key()] = it->get<std::string>();
    }
    m.outputs = doc.at("outputs").get<std::vector<std::string>>();
    m.config = doc.at("config");
    m.started_at = doc.at("started_at").get<std::string>();
    m.finished_at = doc.at("finished_at").get<std::string>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kFormat, std::string("manifest: ") + e.what());
  }
}

void write_manifest(const std::filesystem::path& dir, const RunManifest& manifest) {
  const auto path = dir / kManifestName;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  out << manifest_to_json(manifest).dump(2) << '\n';
  if (!out) throw Error(ErrorKind::kIo, "write failed: " + path.string());
}

RunManifest read_manifest(const std::filesystem::path& dir) {
  const auto path = dir / kManifestName;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kFormat, path.string() + ": " + e.what());
  }
  return manifest_from_json(doc);
}

ArtifactLock::ArtifactLock(const std::filesystem::path& dir) : path_(dir / kLockName) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::kIo, "cannot create " + dir.string() + ": " + ec.message());
  // "x" fails if the file exists, which makes creation the atomic claim.
  std::FILE* f = std::fopen(path_.c_str(), "wx");
  if (f == nullptr) {
    throw Error(ErrorKind::kIo, dir.string() + " is locked by another run (remove " +
                                    path_.string() + " if that run is gone)");
  }
  std::fclose(f);
}

ArtifactLock::~ArtifactLock() {
  std::error_code ec;
  std::filesystem::remove(path_, ec);
}

}  // namespace aia::cli
