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

#include <span>
#include <string>
#include <vector>

#include "cosfire/scene.hpp"

namespace cosfire {

struct TruthEntry {
  std::string frame_id;
  std::string label;
};

// Frame-level detection scores for one scene. A zero denominator yields 0 and
// raises the matching flag.
struct SceneScore {
  std::string scene;
  int tp = 0;
  int fp = 0;
  int fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
  bool precision_undefined = false;
  bool recall_undefined = false;
  bool f_measure_undefined = false;
};

SceneScore score_counts(std::string scene, int tp, int fp, int fn);

// Throws InvalidInput, listing the offending ids, when the two frame sets
// differ.
SceneScore evaluate_scene(std::span<const FrameLabel> predicted,
                          std::span<const TruthEntry> truth, const std::string& scene);

struct EvalReport {
  std::vector<SceneScore> scenes;
  double macro_average_f = 0.0;
};

EvalReport summary_report(std::vector<SceneScore> scenes);

// Two-decimal display rounding.
double round2(double value);

// Aligned table in the layout "Scene TP FN FP Precision Recall F-Measure".
std::string format_table(const EvalReport& report);

// Full-precision JSON.
std::string report_json(const EvalReport& report);

}  // namespace cosfire
