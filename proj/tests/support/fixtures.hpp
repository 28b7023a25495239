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

// Synthetic inputs shared by the unit and acceptance suites.
#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "cosfire/corpus.hpp"
#include "cosfire/filter.hpp"
#include "cosfire/scene.hpp"

namespace cosfire::testing {

// L-shaped corner with 40 px arms, turned by `angle` about the corner.
inline GrayImage l_corner_image(int w, int h, corpus::Point corner, double angle = 0.0) {
  auto segments = corpus::l_corner(corner, 40.0);
  const corpus::Pose pose{corner, angle, {0.0, 0.0}};
  for (auto& s : segments) s = pose.apply(s);
  return corpus::render(w, h, segments);
}

struct LCornerFixture {
  GrayImage prototype = l_corner_image(160, 128, {80, 64});
  Keypoint keypoint{80, 64};
  ConfigSpec spec;
  CosfireFilter filter = configure_filter(prototype, keypoint, spec, "corner", "A");
};

// A configured-looking bank with arbitrary full-precision parameters.
inline SceneBank random_bank(std::uint64_t seed, std::vector<int> filters_per_scene) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  SceneBank bank;
  bank.inhibition = InhibitionParams{0.1 + u(rng), 1.5 + 3 * u(rng)};
  const char* names[] = {"CoffeeCorner", "Working", "Kitchen"};
  int serial = 0;
  for (std::size_t s = 0; s < filters_per_scene.size(); ++s) {
    Scene scene{names[s], 0.05 + 0.9 * u(rng), {}};
    for (int i = 0; i < filters_per_scene[s]; ++i) {
      CosfireFilter f;
      f.name = scene.name + "_" + std::to_string(++serial);
      f.scene = scene.name;
      const int n = 3 + static_cast<int>(u(rng) * 30);
      for (int t = 0; t < n; ++t) {
        f.tuples.push_back({bank.bank.lambdas[static_cast<std::size_t>(u(rng) * 5)],
                            bank.bank.thetas[static_cast<std::size_t>(u(rng) * 8)],
                            20 * u(rng), 6.28 * u(rng)});
      }
      f.sigma0 = 0.3 + u(rng);
      f.alpha_blur = 0.2 * u(rng);
      f.t2 = u(rng);
      f.t3 = u(rng);
      if (i % 2) f.weight_sigma = 1 + 10 * u(rng);
      f.prototype_response = 0.1 + 3 * u(rng);
      scene.filters.push_back(std::move(f));
    }
    bank.scenes.push_back(std::move(scene));
  }
  return bank;
}

}  // namespace cosfire::testing
