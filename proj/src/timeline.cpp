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

#include "cosfire/timeline.hpp"

#include <algorithm>

#include "cosfire/error.hpp"

namespace cosfire {

void SmoothingParams::validate() const {
  if (k < 1) throw InvalidParameter("smoothing window k must be >= 1");
}

std::vector<FrameLabel> fill_holes(std::span<const FrameLabel> labels,
                                   const SmoothingParams& params) {
  params.validate();
  std::vector<FrameLabel> out(labels.begin(), labels.end());
  const auto n = static_cast<std::ptrdiff_t>(labels.size());
  const std::ptrdiff_t k = params.k;

  for (std::ptrdiff_t i = 0; i < n; ++i) {
    if (!labels[i].is_unknown()) continue;
    const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, i - k);
    const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(n - 1, i + k);
    if (lo == i || hi == i) continue;

    // Candidate: any scene in the window; all scenes present must agree.
    const std::string* scene = nullptr;
    bool conflict = false;
    for (std::ptrdiff_t j = lo; j <= hi && !conflict; ++j) {
      if (j == i || labels[j].is_unknown()) continue;
      if (scene == nullptr) {
        scene = &labels[j].label;
      } else if (*scene != labels[j].label) {
        conflict = true;
      }
    }
    if (scene == nullptr || conflict) continue;

    const auto has_scene = [&](std::ptrdiff_t a, std::ptrdiff_t b) {
      for (std::ptrdiff_t j = a; j <= b; ++j) {
        if (labels[j].label == *scene) return true;
      }
      return false;
    };
    if (has_scene(lo, i - 1) && has_scene(i + 1, hi)) out[i].label = *scene;
  }
  return out;
}

std::vector<EventSegment> segment_events(std::span<const FrameLabel> labels) {
  std::vector<EventSegment> events;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const FrameLabel& f = labels[i];
    if (f.is_unknown()) continue;
    const bool continues = i > 0 && !events.empty() && labels[i - 1].label == f.label;
    if (!continues) events.push_back({f.label, f.timestamp, f.timestamp, {}});
    events.back().end = f.timestamp;
    events.back().frame_ids.push_back(f.frame_id);
  }
  return events;
}

}  // namespace cosfire
