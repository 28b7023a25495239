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

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cosfire/filter.hpp"
#include "cosfire/timestamp.hpp"

namespace cosfire {

inline constexpr std::string_view kUnknownLabel = "unknown";

struct Scene {
  std::string name;
  double detection_threshold = 0.25;  // fraction of each filter's prototype response
  std::vector<CosfireFilter> filters;

  bool operator==(const Scene&) const = default;
};

// Named scenes sharing one Gabor bank and inhibition setting.
struct SceneBank {
  GaborBank bank = GaborBank::defaults();
  std::optional<InhibitionParams> inhibition = InhibitionParams{};
  std::vector<Scene> scenes;

  FilterContext context() const { return {bank, inhibition}; }
  const Scene* find(std::string_view name) const;
  Scene* find(std::string_view name);
  std::size_t filter_count() const;

  void validate() const;
  bool operator==(const SceneBank&) const = default;
};

struct FilterVerdict {
  bool responds = false;
  double normalized = 0.0;  // peak response / prototype response
};

// Peak of the rotation-tolerant response relative to the filter's response on
// its own prototype.
FilterVerdict filter_responds(ResponseCache& cache, const CosfireFilter& filter,
                              double threshold, std::span<const double> psis);
FilterVerdict filter_responds(const GrayImage& image, const CosfireFilter& filter,
                              const FilterContext& context, double threshold,
                              std::span<const double> psis);

struct SceneVote {
  std::string scene;
  int count = 0;              // responding filters
  double max_response = 0.0;  // best normalized response over the scene's filters

  bool operator==(const SceneVote&) const = default;
};

struct FrameLabel {
  std::string frame_id;
  Timestamp timestamp{};
  std::string label{kUnknownLabel};
  std::vector<SceneVote> votes;  // bank order

  bool is_unknown() const { return label == kUnknownLabel; }
  bool operator==(const FrameLabel&) const = default;
};

struct LabelOptions {
  std::vector<double> psis{0.0};
  std::optional<double> detection_threshold;  // overrides every scene's own
};

// Most responders wins; a tie goes to the higher max_response; a tie on both
// (within 1e-9) or no responders at all gives 'unknown'.
std::string decide_label(std::span<const SceneVote> votes);

FrameLabel label_frame(const GrayImage& image, const SceneBank& bank,
                       const LabelOptions& options);

struct Frame {
  std::string frame_id;
  Timestamp timestamp{};
  GrayImage image;
};

// Labels in input order. Throws InvalidSequence on decreasing timestamps.
std::vector<FrameLabel> label_sequence(std::span<const Frame> frames,
                                       const SceneBank& bank,
                                       const LabelOptions& options, int jobs = 1);

// Lazily decoded frame; load() may throw cosfire::Error.
struct FrameSource {
  std::string frame_id;
  Timestamp timestamp{};
  std::function<GrayImage()> load;
};

struct LabelledFrame {
  FrameLabel label;
  std::optional<std::string> error;  // set when the frame could not be read
};

// As label_sequence, but a frame that fails to load is labelled 'unknown' and
// carries the error instead of aborting the run.
std::vector<LabelledFrame> label_sources(std::span<const FrameSource> sources,
                                         const SceneBank& bank,
                                         const LabelOptions& options, int jobs = 1);

}  // namespace cosfire
