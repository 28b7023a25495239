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

#include <doctest.h>

#include <filesystem>
#include <set>

#include "cosfire/corpus.hpp"
#include "cosfire/error.hpp"
#include "cosfire/records.hpp"

using namespace cosfire;

TEST_CASE("default corpus layout") {
  const corpus::Corpus c = corpus::generate_corpus();
  REQUIRE(c.frames.size() == 60);
  int unknown = 0;
  std::set<std::string> scenes;
  for (std::size_t i = 0; i < c.frames.size(); ++i) {
    const auto& f = c.frames[i];
    CHECK(f.image.width() == 160);
    CHECK(f.image.height() == 128);
    CHECK(f.image.min_value() >= 0.0);
    CHECK(f.image.max_value() <= 1.0);
    CHECK(std::abs(f.rotation) <= std::numbers::pi / 8);
    if (i > 0) CHECK(f.timestamp - c.frames[i - 1].timestamp == std::chrono::seconds{30});
    if (f.truth == kUnknownLabel) {
      ++unknown;
    } else {
      scenes.insert(f.truth);
    }
  }
  CHECK(unknown == 24);
  CHECK(scenes == std::set<std::string>{"CoffeeCorner", "Working"});

  std::map<std::string, std::pair<int, int>> per_scene;  // images, keypoints
  for (const auto& p : c.prototypes) {
    ++per_scene[p.scene].first;
    per_scene[p.scene].second += static_cast<int>(p.keypoints.size());
    for (const auto& k : p.keypoints) {
      CHECK(k.keypoint.x >= 47);
      CHECK(k.keypoint.y >= 47);
      CHECK(k.keypoint.x < p.image.width() - 47);
      CHECK(k.keypoint.y < p.image.height() - 47);
    }
  }
  CHECK(per_scene["CoffeeCorner"] == std::pair{5, 8});
  CHECK(per_scene["Working"] == std::pair{2, 3});
}

TEST_CASE("corpus is reproducible from its seed") {
  corpus::CorpusSpec spec;
  spec.frame_count = 40;
  const auto a = corpus::generate_corpus(spec);
  const auto b = corpus::generate_corpus(spec);
  REQUIRE(a.frames.size() == b.frames.size());
  for (std::size_t i = 0; i < a.frames.size(); ++i) CHECK(a.frames[i].image == b.frames[i].image);
  spec.seed = 8;
  const auto c = corpus::generate_corpus(spec);
  bool differs = false;
  for (std::size_t i = 0; i < a.frames.size(); ++i) differs |= !(a.frames[i].image == c.frames[i].image);
  CHECK(differs);
}

TEST_CASE("corpus spec validation") {
  corpus::CorpusSpec spec;
  spec.frame_count = 10;
  CHECK_THROWS_AS(corpus::generate_corpus(spec), InvalidParameter);
  spec = {};
  spec.distractor_fraction = 1.0;
  CHECK_THROWS_AS(corpus::generate_corpus(spec), InvalidParameter);
}

TEST_CASE("written corpus") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "cosfire_corpus_test";
  fs::remove_all(dir);
  corpus::CorpusSpec spec;
  spec.frame_count = 40;
  const auto c = corpus::generate_corpus(spec);
  corpus::write_corpus(c, dir);
  const auto manifest = read_manifest(dir / "manifest.csv");
  REQUIRE(manifest.size() == 40);
  for (const auto& m : manifest) CHECK(fs::exists(m.path));
  CHECK(read_truth(dir / "truth.csv").size() == 40);
  const CsvTable protos = read_csv_file(dir / "prototypes.csv");
  CHECK(protos.header == std::vector<std::string>{"image", "x", "y", "scene", "name"});
  CHECK(protos.rows.size() == 11);
  fs::remove_all(dir);
}

TEST_CASE("texture-vs-contour image") {
  const auto tc = corpus::texture_vs_contour();
  CHECK(tc.image.width() == 128);
  CHECK(tc.contour_x < tc.texture_x0);
  CHECK(tc.texture_x1 <= tc.image.width());
}
