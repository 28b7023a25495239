// Copyright 2026 The cosfire-scene Authors.
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
#include <string>
#include <string_view>

#include "cosfire/scene.hpp"

namespace cosfire {

inline constexpr int kBankFormatVersion = 1;

// JSON document:
//   { "version": 1,
//     "bank": { "lambdas": [...], "thetas": [...], "gamma", "sigma_over_lambda",
//               "t1", "inhibition": { "alpha", "surround_ratio" } | null },
//     "scenes": [ { "name", "detection_threshold",
//                   "filters": [ { "name", "tuples": [[lambda, theta, rho, phi]...],
//                                  "sigma0", "alpha_blur", "t2", "t3",
//                                  "weight_sigma": number | "uniform",
//                                  "prototype_response" } ] } ] }
// Numbers are written in shortest round-trip form, so reading a written bank
// reproduces every double exactly.
std::string bank_to_json(const SceneBank& bank);
SceneBank bank_from_json(std::string_view text);

void save_bank(const SceneBank& bank, const std::filesystem::path& path);
SceneBank load_bank(const std::filesystem::path& path);

}  // namespace cosfire
