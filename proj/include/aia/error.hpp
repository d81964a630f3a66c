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

#include <stdexcept>
#include <string>

namespace aia {

enum class ErrorKind {
  kShape,
  kInvalidArgument,
  kParse,
  kValidation,
  kNumeric,
  kIo,
  kFormat,
  kArchitecture,
  kConfig,
};

const char* to_string(ErrorKind kind);

// Base exception for everything the library throws. The message is prefixed
// with the kind so that CLI output stays greppable.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string& message)
      : Error(ErrorKind::kShape, message) {}
};

class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line,
             const std::string& message)
      : Error(ErrorKind::kParse,
              source + ":" + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace aia
