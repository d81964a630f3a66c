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

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace aia::eval {

// Per-reaction tolerance kappa. Labels without an entry resolve to the mean of
// all entries.
class ToleranceTable {
 public:
  ToleranceTable() = default;

  // Optimal kappa per surveyed reaction from the human-judge study.
  static ToleranceTable survey_defaults();

  void set(const std::string& label, double kappa);
  bool contains(std::string_view label) const;
  bool empty() const noexcept { return entries_.empty(); }
  const std::map<std::string, double, std::less<>>& entries() const noexcept {
    return entries_;
  }

  double mean() const;
  double resolve(std::string_view label) const;

 private:
  std::map<std::string, double, std::less<>> entries_;
};

double resolve_kappa(const ToleranceTable& table, std::string_view label);

// Linear-interpolation percentile (q in [0, 100]) of a non-empty sample.
double percentile(std::vector<double> values, double q);

}  // namespace aia::eval
