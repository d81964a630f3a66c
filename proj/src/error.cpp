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

#include "aia/error.hpp"

namespace aia {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kShape:
      return "shape error";
    case ErrorKind::kInvalidArgument:
      return "invalid argument";
    case ErrorKind::kParse:
      return "parse error";
    case ErrorKind::kValidation:
      return "validation error";
    case ErrorKind::kNumeric:
      return "numeric error";
    case ErrorKind::kIo:
      return "io error";
    case ErrorKind::kFormat:
      return "format error";
    case ErrorKind::kArchitecture:
      return "architecture mismatch";
    case ErrorKind::kConfig:
      return "config error";
  }
  return "error";
}

}  // namespace aia
