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

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "cosfire/filter.hpp"
#include "cosfire/image.hpp"
#include "cosfire/metrics.hpp"
#include "cosfire/timestamp.hpp"

namespace cosfire::corpus {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct Segment {
  Point a;
  Point b;
};

// Rotation by `angle` about `pivot` followed by translation; angles follow
// the image axes (positive turns +x towards +y).
struct Pose {
  Point pivot;
  double angle = 0.0;
  Point offset;

  Point apply(Point p) const;
  Segment apply(const Segment& s) const;
};

struct Stroke {
  double width = 2.0;
  double background = 0.0;
  double foreground = 1.0;
};

// Anti-aliased line art: each pixel blends towards the foreground by its
// coverage of the nearest segment.
GrayImage render(int width, int height, std::span<const Segment> segments,
                 const Stroke& stroke = {});

// Sinusoid 0.5 + 0.5 * contrast * cos(2 pi (x cos theta + y sin theta) / wavelength + phase).
GrayImage grating(int width, int height, double wavelength, double theta,
                  double phase = 0.0, double contrast = 1.0);

// Horizontal arm to the right and vertical arm downward, meeting at `corner`.
std::vector<Segment> l_corner(Point corner, double arm);

// Polygonal approximation of a circle outline.
std::vector<Segment> circle(Point centre, double radius, int pieces = 72);

// Left half: one isolated vertical contour. Right half: a vertical grating
// patch. Rectangles are [x0, x1) x [y0, y1).
struct TextureContourImage {
  GrayImage image;
  int contour_x = 0;
  int texture_x0 = 0, texture_x1 = 0, texture_y0 = 0, texture_y1 = 0;
  double wavelength = 0.0;
};
TextureContourImage texture_vs_contour(int width = 128, int height = 96);

// Line-art pattern of one familiar scene with keypoints for filter
// configuration, all relative to an origin at (0, 0).
struct ScenePattern {
  std::string scene;
  std::vector<Segment> segments;
  std::vector<Point> keypoints;
};

ScenePattern coffee_corner_pattern();
ScenePattern working_pattern();

struct CorpusSpec {
  int frame_count = 60;
  int width = 160;
  int height = 128;
  std::uint64_t seed = 7;
  int spacing_seconds = 30;
  Timestamp start = Timestamp{std::chrono::seconds{1'700'000'000}};
  double max_rotation = 0.39269908169872414;  // pi / 8
  double distractor_fraction = 0.4;
};

struct CorpusFrame {
  std::string frame_id;
  Timestamp timestamp{};
  GrayImage image;
  std::string truth;  // scene name or 'unknown'
  double rotation = 0.0;
};

struct PrototypeKeypoint {
  Keypoint keypoint;
  std::string name;
};

struct Prototype {
  std::string id;
  std::string scene;
  GrayImage image;
  std::vector<PrototypeKeypoint> keypoints;
};

struct Corpus {
  std::vector<CorpusFrame> frames;
  std::vector<Prototype> prototypes;
};

// Frames come in runs: a scene run, then at least four distractor frames
// (blank or texture), so hole filling with k = 2 never bridges two runs.
// Prototypes: five CoffeeCorner images carrying eight keypoints and two
// Working images carrying three.
Corpus generate_corpus(const CorpusSpec& spec = {});

// Writes frames/, prototypes/, manifest.csv, truth.csv and prototypes.csv
// (image,x,y,scene,name).
void write_corpus(const Corpus& corpus, const std::filesystem::path& dir);

}  // namespace cosfire::corpus
