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

struct SmoothingParams {
  int k = 2;  // frames inspected on each side of a hole

  void validate() const;
};

// One pass over the original labels. An 'unknown' frame i becomes scene s when
// both [i-k, i-1] and [i+1, i+k] (clipped) contain an s frame and no other
// scene appears anywhere in that window. Labelled frames never change; a frame
// without neighbours on one side is never filled.
std::vector<FrameLabel> fill_holes(std::span<const FrameLabel> labels,
                                   const SmoothingParams& params = {});

struct EventSegment {
  std::string scene;
  Timestamp start{};
  Timestamp end{};
  std::vector<std::string> frame_ids;

  double duration_seconds() const {
    return std::chrono::duration<double>(end - start).count();
  }
  bool operator==(const EventSegment&) const = default;
};

// Maximal runs of one scene label; 'unknown' frames belong to no event.
std::vector<EventSegment> segment_events(std::span<const FrameLabel> labels);

}  // namespace cosfire
