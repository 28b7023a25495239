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

#include "cosfire/scene.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <set>
#include <thread>

#include "cosfire/error.hpp"

namespace cosfire {

namespace {

constexpr double kTieTolerance = 1e-9;

// Runs task(i) for i in [0, n) on up to `jobs` threads. The first exception
// is rethrown after all workers stop.
template <typename Task>
void run_indexed(std::size_t n, int jobs, Task&& task) {
  const auto workers = static_cast<std::size_t>(std::max(1, jobs));
  if (workers == 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(workers, n); ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n && !failed; i = next++) {
        try {
          task(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          failed = true;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

template <typename Seq>
void check_order(const Seq& frames) {
  for (std::size_t i = 1; i < frames.size(); ++i) {
    if (frames[i].timestamp < frames[i - 1].timestamp) {
      throw InvalidSequence("frame '" + frames[i].frame_id + "' at " +
                            format_timestamp(frames[i].timestamp) +
                            " precedes frame '" + frames[i - 1].frame_id + "' at " +
                            format_timestamp(frames[i - 1].timestamp));
    }
  }
}

FrameLabel empty_votes(const SceneBank& bank) {
  FrameLabel label;
  for (const auto& scene : bank.scenes) label.votes.push_back({scene.name, 0, 0.0});
  return label;
}

}  // namespace

const Scene* SceneBank::find(std::string_view name) const {
  for (const auto& s : scenes) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

Scene* SceneBank::find(std::string_view name) {
  for (auto& s : scenes) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

std::size_t SceneBank::filter_count() const {
  std::size_t n = 0;
  for (const auto& s : scenes) n += s.filters.size();
  return n;
}

void SceneBank::validate() const {
  bank.validate();
  if (inhibition) inhibition->validate();
  std::set<std::string> scene_names;
  std::set<std::string> filter_names;
  for (const auto& scene : scenes) {
    if (scene.name.empty()) throw InvalidParameter("scene bank: empty scene name");
    if (scene.name == kUnknownLabel) {
      throw InvalidParameter("scene bank: 'unknown' is reserved");
    }
    if (!scene_names.insert(scene.name).second) {
      throw InvalidParameter("scene bank: duplicate scene '" + scene.name + "'");
    }
    if (!(scene.detection_threshold > 0.0 && scene.detection_threshold <= 1.0)) {
      throw InvalidParameter("scene '" + scene.name +
                             "': detection threshold must lie in (0, 1]");
    }
    if (scene.filters.empty()) {
      throw InvalidParameter("scene '" + scene.name + "' has no filters");
    }
    for (const auto& f : scene.filters) {
      f.validate();
      if (f.scene != scene.name) {
        throw InvalidParameter("filter '" + f.name + "' belongs to scene '" + f.scene +
                               "' but is listed under '" + scene.name + "'");
      }
      if (!filter_names.insert(f.name).second) {
        throw InvalidParameter("scene bank: duplicate filter name '" + f.name + "'");
      }
      for (const auto& t : f.tuples) {
        if (!bank.lambda_index(t.lambda) || !bank.theta_index(t.theta)) {
          throw InvalidParameter("filter '" + f.name + "' uses a channel outside the bank");
        }
      }
    }
  }
}

FilterVerdict filter_responds(ResponseCache& cache, const CosfireFilter& filter,
                              double threshold, std::span<const double> psis) {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw InvalidParameter("detection threshold must lie in (0, 1]");
  }
  if (!(filter.prototype_response > 0.0)) {
    throw CorruptFilter("filter '" + filter.name + "' has no prototype response");
  }
  const double peak = rotation_tolerant_apply(cache, filter, psis).max_value();
  const double normalized = std::max(0.0, peak) / filter.prototype_response;
  return {normalized >= threshold, normalized};
}

FilterVerdict filter_responds(const GrayImage& image, const CosfireFilter& filter,
                              const FilterContext& context, double threshold,
                              std::span<const double> psis) {
  ResponseCache cache(image, context);
  return filter_responds(cache, filter, threshold, psis);
}

std::string decide_label(std::span<const SceneVote> votes) {
  int top = 0;
  for (const auto& v : votes) top = std::max(top, v.count);
  if (top == 0) return std::string(kUnknownLabel);

  const SceneVote* best = nullptr;
  for (const auto& v : votes) {
    if (v.count == top && (best == nullptr || v.max_response > best->max_response)) {
      best = &v;
    }
  }
  const auto contenders = std::count_if(votes.begin(), votes.end(), [&](const SceneVote& v) {
    return v.count == top && best->max_response - v.max_response <= kTieTolerance;
  });
  return contenders > 1 ? std::string(kUnknownLabel) : best->scene;
}

FrameLabel label_frame(const GrayImage& image, const SceneBank& bank,
                       const LabelOptions& options) {
  FrameLabel label = empty_votes(bank);
  if (bank.scenes.empty()) return label;
  ResponseCache cache(image, bank.context());
  for (std::size_t s = 0; s < bank.scenes.size(); ++s) {
    const Scene& scene = bank.scenes[s];
    const double threshold = options.detection_threshold.value_or(scene.detection_threshold);
    auto& vote = label.votes[s];
    for (const auto& filter : scene.filters) {
      const FilterVerdict verdict = filter_responds(cache, filter, threshold, options.psis);
      if (verdict.responds) ++vote.count;
      vote.max_response = std::max(vote.max_response, verdict.normalized);
    }
  }
  label.label = decide_label(label.votes);
  return label;
}

std::vector<FrameLabel> label_sequence(std::span<const Frame> frames,
                                       const SceneBank& bank,
                                       const LabelOptions& options, int jobs) {
  check_order(frames);
  std::vector<FrameLabel> out(frames.size());
  run_indexed(frames.size(), jobs, [&](std::size_t i) {
    FrameLabel label = label_frame(frames[i].image, bank, options);
    label.frame_id = frames[i].frame_id;
    label.timestamp = frames[i].timestamp;
    out[i] = std::move(label);
  });
  return out;
}

std::vector<LabelledFrame> label_sources(std::span<const FrameSource> sources,
                                         const SceneBank& bank,
                                         const LabelOptions& options, int jobs) {
  check_order(sources);
  std::vector<LabelledFrame> out(sources.size());
  run_indexed(sources.size(), jobs, [&](std::size_t i) {
    const FrameSource& src = sources[i];
    LabelledFrame result;
    GrayImage image;
    try {
      image = src.load();
    } catch (const Error& e) {
      result.label = empty_votes(bank);
      result.error = e.what();
    }
    if (!result.error) result.label = label_frame(image, bank, options);
    result.label.frame_id = src.frame_id;
    result.label.timestamp = src.timestamp;
    out[i] = std::move(result);
  });
  return out;
}

}  // namespace cosfire
