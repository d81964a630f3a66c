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

#include <cstddef>
#include <cstdint>
#include <vector>

#include "aia/data/skeleton.hpp"

namespace aia::data {

// The 21 set ids of the SBU Kinect interaction dataset; synthetic records are
// assigned to them round-robin so the default held-out split applies.
const std::vector<std::string>& sbu_set_ids();

// Deterministic desk-scale stand-in for SBU: for each of `per_category`
// rounds, one record per category, each a pair of linear-plus-sinusoidal
// joint trajectories over `frames` frames. Output order is round-major.
std::vector<InteractionRecord> synth_generate(std::uint64_t seed,
                                              std::size_t per_category,
                                              std::size_t frames,
                                              std::size_t joints = kDefaultJoints);

}  // namespace aia::data
