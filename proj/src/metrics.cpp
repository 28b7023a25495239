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

#include "cosfire/metrics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "cosfire/error.hpp"
#include "json.hpp"

namespace cosfire {

SceneScore score_counts(std::string scene, int tp, int fp, int fn) {
  if (tp < 0 || fp < 0 || fn < 0) throw InvalidInput("counts must be non-negative");
  SceneScore s{std::move(scene), tp, fp, fn};
  if (tp + fp > 0) {
    s.precision = static_cast<double>(tp) / (tp + fp);
  } else {
    s.precision_undefined = true;
  }
  if (tp + fn > 0) {
    s.recall = static_cast<double>(tp) / (tp + fn);
  } else {
    s.recall_undefined = true;
  }
  if (s.precision + s.recall > 0.0) {
    s.f_measure = 2.0 * s.precision * s.recall / (s.precision + s.recall);
  } else {
    s.f_measure_undefined = true;
  }
  return s;
}

namespace {

std::string id_list(const std::vector<std::string>& ids) {
  constexpr std::size_t kShown = 10;
  std::string out;
  for (std::size_t i = 0; i < std::min(ids.size(), kShown); ++i) {
    out += (i ? ", " : "") + ids[i];
  }
  if (ids.size() > kShown) out += fmt::format(" and {} more", ids.size() - kShown);
  return out;
}

}  // namespace

SceneScore evaluate_scene(std::span<const FrameLabel> predicted,
                          std::span<const TruthEntry> truth, const std::string& scene) {
  std::map<std::string, const std::string*> truth_by_id;
  for (const auto& t : truth) truth_by_id[t.frame_id] = &t.label;

  std::vector<std::string> missing_truth;
  std::map<std::string, bool> seen;
  for (const auto& p : predicted) {
    seen[p.frame_id] = true;
    if (!truth_by_id.contains(p.frame_id)) missing_truth.push_back(p.frame_id);
  }
  std::vector<std::string> missing_prediction;
  for (const auto& [id, label] : truth_by_id) {
    if (!seen.contains(id)) missing_prediction.push_back(id);
  }
  if (!missing_truth.empty() || !missing_prediction.empty()) {
    std::string msg = "predicted and ground-truth frame sets differ";
    if (!missing_truth.empty()) msg += "; no ground truth for: " + id_list(missing_truth);
    if (!missing_prediction.empty()) msg += "; no prediction for: " + id_list(missing_prediction);
    throw InvalidInput(msg);
  }

  int tp = 0, fp = 0, fn = 0;
  for (const auto& p : predicted) {
    const bool said = p.label == scene;
    const bool is = *truth_by_id.at(p.frame_id) == scene;
    if (said && is) ++tp;
    if (said && !is) ++fp;
    if (!said && is) ++fn;
  }
  return score_counts(scene, tp, fp, fn);
}

EvalReport summary_report(std::vector<SceneScore> scenes) {
  if (scenes.empty()) throw InvalidInput("summary report needs at least one scene");
  EvalReport report;
  double sum = 0.0;
  for (const auto& s : scenes) sum += s.f_measure;
  report.macro_average_f = sum / static_cast<double>(scenes.size());
  report.scenes = std::move(scenes);
  return report;
}

double round2(double value) { return std::round(value * 100.0) / 100.0; }

std::string format_table(const EvalReport& report) {
  std::size_t width = 6;
  for (const auto& s : report.scenes) width = std::max(width, s.scene.size());
  std::string out = fmt::format("{:<{}}  {:>5}  {:>5}  {:>5}  {:>9}  {:>6}  {:>9}\n", "Scene",
                                width, "TP", "FN", "FP", "Precision", "Recall", "F-Measure");
  for (const auto& s : report.scenes) {
    out += fmt::format("{:<{}}  {:>5}  {:>5}  {:>5}  {:>9.2f}  {:>6.2f}  {:>9.2f}\n", s.scene,
                       width, s.tp, s.fn, s.fp, round2(s.precision), round2(s.recall),
                       round2(s.f_measure));
  }
  out += fmt::format("Macro-average F-Measure: {:.2f}\n", round2(report.macro_average_f));
  return out;
}

std::string report_json(const EvalReport& report) {
  nlohmann::json scenes = nlohmann::json::array();
  for (const auto& s : report.scenes) {
    scenes.push_back({{"scene", s.scene},
                      {"tp", s.tp},
                      {"fp", s.fp},
                      {"fn", s.fn},
                      {"precision", s.precision},
                      {"recall", s.recall},
                      {"f_measure", s.f_measure},
                      {"precision_undefined", s.precision_undefined},
                      {"recall_undefined", s.recall_undefined},
                      {"f_measure_undefined", s.f_measure_undefined}});
  }
  const nlohmann::json doc = {{"scenes", std::move(scenes)},
                              {"macro_average_f", report.macro_average_f}};
  return doc.dump(2) + "\n";
}

}  // namespace cosfire
