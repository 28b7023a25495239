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

#include "cosfire/corpus.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

#include "cosfire/error.hpp"
#include "cosfire/imaging.hpp"
#include "cosfire/records.hpp"
#include "cosfire/scene.hpp"

namespace cosfire::corpus {

namespace {

constexpr double kPi = std::numbers::pi;

double distance_to_segment(Point p, const Segment& s) {
  const double vx = s.b.x - s.a.x;
  const double vy = s.b.y - s.a.y;
  const double len2 = vx * vx + vy * vy;
  double t = len2 > 0.0 ? ((p.x - s.a.x) * vx + (p.y - s.a.y) * vy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p.x - (s.a.x + t * vx), p.y - (s.a.y + t * vy));
}

}  // namespace

Point Pose::apply(Point p) const {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const double dx = p.x - pivot.x;
  const double dy = p.y - pivot.y;
  return {pivot.x + c * dx - s * dy + offset.x, pivot.y + s * dx + c * dy + offset.y};
}

Segment Pose::apply(const Segment& s) const { return {apply(s.a), apply(s.b)}; }

GrayImage render(int width, int height, std::span<const Segment> segments,
                 const Stroke& stroke) {
  GrayImage out(width, height, stroke.background);
  const double reach = stroke.width / 2.0 + 0.5;
  for (const auto& s : segments) {
    const int x0 = std::max(0, static_cast<int>(std::floor(std::min(s.a.x, s.b.x) - reach)));
    const int x1 = std::min(width - 1, static_cast<int>(std::ceil(std::max(s.a.x, s.b.x) + reach)));
    const int y0 = std::max(0, static_cast<int>(std::floor(std::min(s.a.y, s.b.y) - reach)));
    const int y1 = std::min(height - 1, static_cast<int>(std::ceil(std::max(s.a.y, s.b.y) + reach)));
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        const double coverage =
            std::clamp(reach - distance_to_segment({double(x), double(y)}, s), 0.0, 1.0);
        const double v = stroke.background + coverage * (stroke.foreground - stroke.background);
        // Keep the value furthest from the background where strokes overlap.
        if (std::abs(v - stroke.background) > std::abs(out(x, y) - stroke.background)) {
          out(x, y) = v;
        }
      }
    }
  }
  return out;
}

GrayImage grating(int width, int height, double wavelength, double theta, double phase,
                  double contrast) {
  GrayImage out(width, height);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      out(x, y) = 0.5 + 0.5 * contrast * std::cos(2.0 * kPi * (x * c + y * s) / wavelength + phase);
    }
  }
  return out;
}

std::vector<Segment> l_corner(Point corner, double arm) {
  return {{corner, {corner.x + arm, corner.y}}, {corner, {corner.x, corner.y + arm}}};
}

TextureContourImage texture_vs_contour(int width, int height) {
  TextureContourImage out;
  out.wavelength = 8.0;
  out.contour_x = width / 4;
  out.texture_x0 = width / 2 + 4;
  out.texture_x1 = width - 4;
  out.texture_y0 = 8;
  out.texture_y1 = height - 8;

  const Segment contour{{double(out.contour_x), 8.0}, {double(out.contour_x), height - 9.0}};
  out.image = render(width, height, std::span(&contour, 1), {2.0, 0.2, 0.8});
  const GrayImage bars = grating(width, height, out.wavelength, 0.0);
  for (int y = out.texture_y0; y < out.texture_y1; ++y) {
    for (int x = out.texture_x0; x < out.texture_x1; ++x) {
      out.image(x, y) = 0.2 + 0.6 * bars(x, y);
    }
  }
  return out;
}

}  // namespace cosfire::corpus

namespace cosfire::corpus {

namespace {

struct Run {
  std::string scene;  // empty for distractors
  int length;
};

std::vector<Run> plan_runs(const CorpusSpec& spec) {
  if (spec.frame_count < 1) throw InvalidParameter("corpus: frame count must be positive");
  if (!(spec.distractor_fraction >= 0.0 && spec.distractor_fraction < 1.0)) {
    throw InvalidParameter("corpus: distractor fraction must lie in [0, 1)");
  }
  constexpr int kSceneRuns = 4;
  constexpr int kMinGap = 4;  // 2k for k = 2
  const int distractors =
      static_cast<int>(std::lround(spec.frame_count * spec.distractor_fraction));
  const int scene_frames = spec.frame_count - distractors;
  if (scene_frames < kSceneRuns || distractors < kSceneRuns * kMinGap) {
    throw InvalidParameter(fmt::format(
        "corpus: {} frames with distractor fraction {} cannot hold {} scene runs separated by "
        "{} distractors",
        spec.frame_count, spec.distractor_fraction, kSceneRuns, kMinGap));
  }
  const std::string names[] = {"CoffeeCorner", "Working"};
  std::vector<Run> runs;
  for (int r = 0; r < kSceneRuns; ++r) {
    const int scene_len = scene_frames / kSceneRuns + (r < scene_frames % kSceneRuns ? 1 : 0);
    const int gap_len = distractors / kSceneRuns + (r < distractors % kSceneRuns ? 1 : 0);
    runs.push_back({names[r % 2], scene_len});
    runs.push_back({"", gap_len});
  }
  return runs;
}

GrayImage add_noise(GrayImage image, double sigma, std::mt19937_64& rng) {
  std::normal_distribution<double> noise(0.0, sigma);
  for (double& v : image.pixels()) v = std::clamp(v + noise(rng), 0.0, 1.0);
  return image;
}

GrayImage blank_frame(const CorpusSpec& spec, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> level(0.3, 0.7);
  std::uniform_real_distribution<double> tilt(-0.1, 0.1);
  const double base = level(rng);
  const double gx = tilt(rng) / spec.width;
  const double gy = tilt(rng) / spec.height;
  GrayImage out(spec.width, spec.height);
  for (int y = 0; y < spec.height; ++y) {
    for (int x = 0; x < spec.width; ++x) {
      out(x, y) = std::clamp(base + gx * (x - spec.width / 2.0) + gy * (y - spec.height / 2.0),
                             0.0, 1.0);
    }
  }
  return out;
}

GrayImage texture_frame(const CorpusSpec& spec, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> wavelength(5.0, 12.0);
  std::uniform_real_distribution<double> angle(0.0, kPi);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
  std::bernoulli_distribution plaid(0.5);
  GrayImage out = grating(spec.width, spec.height, wavelength(rng), angle(rng), phase(rng), 0.6);
  if (plaid(rng)) {
    const GrayImage second =
        grating(spec.width, spec.height, wavelength(rng), angle(rng), phase(rng), 0.6);
    auto dst = out.pixels();
    auto src = second.pixels();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = 0.5 * (dst[i] + src[i]);
  }
  return out;
}

Stroke frame_stroke(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> background(0.15, 0.35);
  std::uniform_real_distribution<double> contrast(0.45, 0.65);
  std::bernoulli_distribution inverted(0.3);
  const double bg = background(rng);
  const double fg = bg + contrast(rng);
  return inverted(rng) ? Stroke{2.0, fg, bg} : Stroke{2.0, bg, fg};
}

}  // namespace

std::vector<Segment> circle(Point centre, double radius, int pieces) {
  if (radius <= 0.0 || pieces < 3) throw InvalidParameter("circle: radius and piece count");
  std::vector<Segment> out;
  for (int i = 0; i < pieces; ++i) {
    const double a0 = 2.0 * kPi * i / pieces;
    const double a1 = 2.0 * kPi * (i + 1) / pieces;
    out.push_back({{centre.x + radius * std::cos(a0), centre.y + radius * std::sin(a0)},
                   {centre.x + radius * std::cos(a1), centre.y + radius * std::sin(a1)}});
  }
  return out;
}

ScenePattern coffee_corner_pattern() {
  // Shelving unit drawn as a 5x3 grid of bays; keypoints sit on the interior
  // crossings.
  ScenePattern p;
  p.scene = "CoffeeCorner";
  const double xs[] = {-45.0, -27.0, -9.0, 9.0, 27.0, 45.0};
  const double ys[] = {-27.0, -9.0, 9.0, 27.0};
  for (double y : ys) p.segments.push_back({{xs[0], y}, {xs[5], y}});
  for (double x : xs) p.segments.push_back({{x, ys[0]}, {x, ys[3]}});
  for (double y : {ys[1], ys[2]}) {
    for (int i = 1; i <= 4; ++i) p.keypoints.push_back({xs[i], y});
  }
  return p;
}

ScenePattern working_pattern() {
  // Three rings standing in for a mug rim, a clock and a lamp shade: curved
  // structure with no junctions.
  ScenePattern p;
  p.scene = "Working";
  const Point centres[] = {{-32.0, 10.0}, {32.0, 10.0}, {0.0, -24.0}};
  for (const Point& c : centres) {
    const auto ring = circle(c, 20.0);
    p.segments.insert(p.segments.end(), ring.begin(), ring.end());
  }
  p.keypoints = {centres[0], centres[1], centres[2]};
  return p;
}

Corpus generate_corpus(const CorpusSpec& spec) {
  if (spec.width < 128 || spec.height < 112) {
    throw InvalidParameter("corpus: frames must be at least 128x112");
  }
  std::mt19937_64 rng(spec.seed);
  const ScenePattern coffee = coffee_corner_pattern();
  const ScenePattern working = working_pattern();
  const Point centre{spec.width / 2.0, spec.height / 2.0};

  Corpus corpus;

  // Prototype images: pattern drawn upright and shifted so the chosen
  // keypoints straddle the image centre.
  const auto add_prototypes = [&](const ScenePattern& pattern, const std::string& stem,
                                  const std::vector<std::vector<std::size_t>>& groups) {
    int filter_no = 0;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      Point mean;
      for (std::size_t k : groups[g]) {
        mean.x += pattern.keypoints[k].x / groups[g].size();
        mean.y += pattern.keypoints[k].y / groups[g].size();
      }
      const Point offset{std::round(centre.x - mean.x), std::round(centre.y - mean.y)};
      std::vector<Segment> placed;
      for (const auto& s : pattern.segments) {
        placed.push_back({{s.a.x + offset.x, s.a.y + offset.y}, {s.b.x + offset.x, s.b.y + offset.y}});
      }
      Prototype proto;
      proto.id = fmt::format("{}_{}", stem, g + 1);
      proto.scene = pattern.scene;
      proto.image = render(spec.width, spec.height, placed, {2.0, 0.2, 0.8});
      for (std::size_t k : groups[g]) {
        const Keypoint kp{static_cast<int>(std::lround(pattern.keypoints[k].x + offset.x)),
                          static_cast<int>(std::lround(pattern.keypoints[k].y + offset.y))};
        proto.keypoints.push_back({kp, fmt::format("{}_{}", pattern.scene, ++filter_no)});
      }
      corpus.prototypes.push_back(std::move(proto));
    }
  };
  add_prototypes(coffee, "coffee", {{0, 1}, {2, 3}, {4, 5}, {6}, {7}});  // 8 filters
  add_prototypes(working, "working", {{0, 1}, {2}});

  std::uniform_real_distribution<double> rotation(-spec.max_rotation, spec.max_rotation);
  std::uniform_real_distribution<double> shift_x(-12.0, 12.0);
  std::uniform_real_distribution<double> shift_y(-10.0, 10.0);
  std::bernoulli_distribution textured(0.5);

  int index = 0;
  for (const Run& run : plan_runs(spec)) {
    for (int i = 0; i < run.length; ++i, ++index) {
      CorpusFrame frame;
      frame.frame_id = fmt::format("frame_{:03}", index);
      frame.timestamp = spec.start + std::chrono::seconds{spec.spacing_seconds * index};
      if (run.scene.empty()) {
        frame.truth = std::string(kUnknownLabel);
        frame.image = textured(rng) ? texture_frame(spec, rng) : blank_frame(spec, rng);
      } else {
        frame.truth = run.scene;
        // The middle frame of each run has the pattern out of view, leaving a
        // hole for temporal smoothing.
        if (run.length >= 3 && i == run.length / 2) {
          frame.image = blank_frame(spec, rng);
        } else {
          const ScenePattern& pattern = run.scene == coffee.scene ? coffee : working;
          frame.rotation = rotation(rng);
          const Pose pose{{0.0, 0.0}, frame.rotation,
                          {centre.x + shift_x(rng), centre.y + shift_y(rng)}};
          std::vector<Segment> placed;
          for (const auto& s : pattern.segments) placed.push_back(pose.apply(s));
          frame.image = render(spec.width, spec.height, placed, frame_stroke(rng));
        }
      }
      frame.image = add_noise(std::move(frame.image), 0.01, rng);
      corpus.frames.push_back(std::move(frame));
    }
  }
  return corpus;
}

void write_corpus(const Corpus& corpus, const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir / "frames");
  fs::create_directories(dir / "prototypes");

  std::vector<ManifestEntry> manifest;
  std::vector<TruthEntry> truth;
  for (const auto& f : corpus.frames) {
    const fs::path rel = fs::path("frames") / (f.frame_id + ".png");
    save_image(dir / rel, f.image);
    manifest.push_back({f.frame_id, rel, f.timestamp});
    truth.push_back({f.frame_id, f.truth});
  }
  std::ofstream manifest_out(dir / "manifest.csv");
  write_manifest(manifest_out, manifest);
  std::ofstream truth_out(dir / "truth.csv");
  write_truth(truth_out, truth);

  std::ofstream protos(dir / "prototypes.csv");
  protos << "image,x,y,scene,name\n";
  for (const auto& p : corpus.prototypes) {
    const fs::path rel = fs::path("prototypes") / (p.id + ".png");
    save_image(dir / rel, p.image);
    for (const auto& k : p.keypoints) {
      protos << rel.generic_string() << ',' << k.keypoint.x << ',' << k.keypoint.y << ','
             << p.scene << ',' << k.name << '\n';
    }
  }
  if (!manifest_out || !truth_out || !protos) {
    throw InvalidInput("cannot write corpus files under " + dir.string());
  }
}

}  // namespace cosfire::corpus
