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
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "aia/data/skeleton.hpp"

namespace aia::data {

struct SbuParseOptions {
  // Strict: every line carries exactly 1 + 2*3N fields and all values are
  // range-checked. Lenient: blank lines and trailing whitespace or commas are
  // tolerated and ranges are not checked.
  bool strict = true;
  std::size_t joints = kDefaultJoints;
  // Inferred from an SBU directory layout (<set>/<class>/<take>/file) when
  // not given.
  std::optional<Category> category;
  std::optional<std::string> set_id;
};

// SBU class folder numbers 01..08.
std::optional<Category> sbu_category_from_folder(std::string_view folder);

InteractionRecord parse_sbu_stream(std::istream& in, const std::string& source,
                                   const SbuParseOptions& options);
InteractionRecord parse_sbu_file(const std::filesystem::path& path,
                                 SbuParseOptions options = {});

// Writes the record back as "index,v1,...,v6N" lines with 6 decimals.
std::string format_sbu(const InteractionRecord& record);

// Every skeleton_pos.txt under an SBU-layout root, in sorted path order.
std::vector<InteractionRecord> load_sbu_tree(const std::filesystem::path& root,
                                             const SbuParseOptions& options = {});

}  // namespace aia::data
