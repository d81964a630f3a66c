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

#include "aia/data/sbu.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "aia/error.hpp"

namespace aia::data {

namespace {

std::string_view rtrim(std::string_view s) {
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' ||
                        s.back() == ',')) {
    s.remove_suffix(1);
  }
  return s;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

bool parse_double(std::string_view field, double& out) {
  field = trim(field);
  if (field.empty()) return false;
  const char* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, out);
  return ec == std::errc() && ptr == end;
}

}  // namespace

std::optional<Category> sbu_category_from_folder(std::string_view folder) {
  static constexpr std::array<Category, 8> kSbuOrder = {
      Category::kApproaching, Category::kDeparting,   Category::kKicking,
      Category::kPushing,     Category::kHandshaking, Category::kHugging,
      Category::kExchanging,  Category::kPunching,
  };
  int number = 0;
  auto [ptr, ec] = std::from_chars(folder.data(), folder.data() + folder.size(), number);
  if (ec != std::errc() || ptr != folder.data() + folder.size() || number < 1 ||
      number > 8) {
    return std::nullopt;
  }
  return kSbuOrder[static_cast<std::size_t>(number - 1)];
}

InteractionRecord parse_sbu_stream(std::istream& in, const std::string& source,
                                   const SbuParseOptions& options) {
  const std::size_t per_person = options.joints * kCoordsPerJoint;
  const std::size_t expected = 1 + 2 * per_person;
  std::vector<double> actor;
  std::vector<double> reactor;
  std::size_t frames = 0;
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string_view> fields;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (!options.strict) view = rtrim(view);
    if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
    if (view.empty()) {
      if (options.strict && in.peek() != std::char_traits<char>::eof()) {
        throw ParseError(source, line_no, "blank line");
      }
      continue;
    }
    fields.clear();
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = view.find(',', start);
      fields.push_back(view.substr(start, comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (fields.size() != expected) {
      throw ParseError(source, line_no,
                       "expected " + std::to_string(expected) + " fields, got " +
                           std::to_string(fields.size()));
    }
    double index = 0.0;
    if (!parse_double(fields[0], index)) {
      throw ParseError(source, line_no, "bad frame index '" +
                                            std::string(fields[0]) + "'");
    }
    for (std::size_t i = 1; i < expected; ++i) {
      double v = 0.0;
      if (!parse_double(fields[i], v)) {
        throw ParseError(source, line_no, "field " + std::to_string(i + 1) +
                                              " is not a number: '" +
                                              std::string(fields[i]) + "'");
      }
      (i <= per_person ? actor : reactor).push_back(v);
    }
    ++frames;
  }
  if (frames == 0) throw ParseError(source, line_no, "no frames");

  InteractionRecord record;
  record.actor = SkeletonSequence(frames, options.joints, std::move(actor));
  record.reactor = SkeletonSequence(frames, options.joints, std::move(reactor));
  record.category = options.category.value_or(Category::kApproaching);
  record.set_id = options.set_id.value_or("");
  if (options.strict) {
    try {
      validate_record(record);
    } catch (const Error& e) {
      throw Error(ErrorKind::kValidation, source + ": " + e.what());
    }
  }
  return record;
}

InteractionRecord parse_sbu_file(const std::filesystem::path& path,
                                 SbuParseOptions options) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  // <set>/<class>/<take>/skeleton_pos.txt
  const auto take_dir = path.parent_path();
  const auto class_dir = take_dir.parent_path();
  if (!options.category) {
    options.category = sbu_category_from_folder(class_dir.filename().string());
  }
  if (!options.set_id) {
    const std::string set = class_dir.parent_path().filename().string();
    if (!set.empty()) options.set_id = set;
  }
  return parse_sbu_stream(in, path.string(), options);
}

std::string format_sbu(const InteractionRecord& record) {
  std::string out;
  char buf[32];
  for (std::size_t t = 0; t < record.actor.frames(); ++t) {
    out += std::to_string(t + 1);
    for (const SkeletonSequence* s : {&record.actor, &record.reactor}) {
      for (double v : s->frame(t)) {
        std::snprintf(buf, sizeof(buf), ",%.6f", v);
        out += buf;
      }
    }
    out += '\n';
  }
  return out;
}

std::vector<InteractionRecord> load_sbu_tree(const std::filesystem::path& root,
                                             const SbuParseOptions& options) {
  if (!std::filesystem::is_directory(root)) {
    throw Error(ErrorKind::kIo, "not a directory: " + root.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(root)) {
    if (entry.is_regular_file() && entry.path().filename() == "skeleton_pos.txt") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    throw Error(ErrorKind::kIo, "no skeleton_pos.txt files under " + root.string());
  }
  std::vector<InteractionRecord> records;
  records.reserve(files.size());
  for (const auto& f : files) records.push_back(parse_sbu_file(f, options));
  return records;
}

}  // namespace aia::data
