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

#include "aia/eval/tolerance.hpp"

#include <algorithm>
#include <cmath>

#include "aia/error.hpp"

namespace aia::eval {

ToleranceTable ToleranceTable::survey_defaults() {
  ToleranceTable t;
  t.set("handshaking", 79.52);
  t.set("punching", 52.04);
  t.set("kicking", 93.17);
  t.set("departing", 71.77);
  t.set("pushing", 22.77);
  return t;
}

void ToleranceTable::set(const std::string& label, double kappa) {
  if (!(kappa >= 0.0)) {
    throw Error(ErrorKind::kInvalidArgument,
                "tolerance table: kappa for '" + label + "' must be >= 0");
  }
  entries_[label] = kappa;
}

bool ToleranceTable::contains(std::string_view label) const {
  return entries_.find(label) != entries_.end();
}

double ToleranceTable::mean() const {
  if (entries_.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "tolerance table is empty");
  }
  double total = 0.0;
  for (const auto& [label, kappa] : entries_) total += kappa;
  return total / static_cast<double>(entries_.size());
}

double ToleranceTable::resolve(std::string_view label) const {
  if (entries_.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "tolerance table is empty");
  }
  const auto it = entries_.find(label);
  return it != entries_.end() ? it->second : mean();
}

double resolve_kappa(const ToleranceTable& table, std::string_view label) {
  return table.resolve(label);
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) throw Error(ErrorKind::kInvalidArgument, "percentile: no values");
  if (!(q >= 0.0 && q <= 100.0)) {
    throw Error(ErrorKind::kInvalidArgument, "percentile: q must lie in [0, 100]");
  }
  std::sort(values.begin(), values.end());
  const double pos = q / 100.0 * static_cast<double>(values.size() - 1);
  const auto lower = static_cast<std::size_t>(std::floor(pos));
  const std::size_t upper = std::min(lower + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lower);
  return values[lower] + frac * (values[upper] - values[lower]);
}

}  // namespace aia::eval
