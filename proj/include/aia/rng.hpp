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
#include <random>

namespace aia {

// mt19937_64 with a fixed bits-to-double mapping, so seeded streams are
// identical across standard library implementations.
class UnitRng {
 public:
  explicit UnitRng(std::uint64_t seed) : engine_(seed) {}

  // [0, 1) from the top 53 bits.
  double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double in(double lo, double hi) { return lo + (hi - lo) * next(); }
  std::uint64_t bits() { return engine_(); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(next() * static_cast<double>(n)); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace aia
