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

#include <random>

#include "cosfire/error.hpp"
#include "cosfire/timeline.hpp"
#include "support/oracles.hpp"

using namespace cosfire;
using cosfire::testing::fill_holes_oracle;
using cosfire::testing::make_labels;

namespace {

const std::string U(kUnknownLabel);

std::vector<std::string> names_of(const std::vector<FrameLabel>& labels) {
  std::vector<std::string> out;
  for (const auto& l : labels) out.push_back(l.label);
  return out;
}

std::vector<std::string> smooth(const std::vector<std::string>& names, int k = 2) {
  return names_of(fill_holes(make_labels(names), {k}));
}

}  // namespace

TEST_CASE("worked hole-filling examples") {
  CHECK(smooth({"A", U, "A"}) == std::vector<std::string>{"A", "A", "A"});
  CHECK(smooth({"A", U, "B"}) == std::vector<std::string>{"A", U, "B"});
  CHECK(smooth({"A", U, U, "A", U}) == std::vector<std::string>{"A", "A", "A", "A", U});
}

TEST_CASE("hole-filling edge cases") {
  CHECK(smooth({}).empty());
  CHECK(smooth({U}) == std::vector<std::string>{U});
  CHECK(smooth({U, "A", "A"}) == std::vector<std::string>{U, "A", "A"});
  CHECK(smooth({"A", U, U, U, "A"}) == std::vector<std::string>{"A", U, "A", U, "A"});
  CHECK(smooth({"A", U, U, U, "A"}, 3) == std::vector<std::string>{"A", "A", "A", "A", "A"});
  CHECK(smooth({"A", "B", U, "A"}) == std::vector<std::string>{"A", "B", U, "A"});
  CHECK(smooth({"A", U, "A"}, 1) == std::vector<std::string>{"A", "A", "A"});
  CHECK_THROWS_AS(fill_holes(make_labels({"A"}), {0}), InvalidParameter);
}

TEST_CASE("hole filling matches the window-scan oracle") {
  std::mt19937_64 rng(99);
  const std::vector<std::string> alphabet{"A", "B", "C", U, U};
  std::uniform_int_distribution<int> len(0, 50);
  std::uniform_int_distribution<int> pick(0, static_cast<int>(alphabet.size()) - 1);
  std::uniform_int_distribution<int> kk(1, 4);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<std::string> seq(static_cast<std::size_t>(len(rng)));
    for (auto& s : seq) s = alphabet[static_cast<std::size_t>(pick(rng))];
    const int k = kk(rng);
    const auto labels = make_labels(seq);
    const auto filled = fill_holes(labels, {k});
    REQUIRE(filled.size() == seq.size());
    CHECK(names_of(filled) == fill_holes_oracle(seq, k));
    for (std::size_t i = 0; i < seq.size(); ++i) {
      CHECK(filled[i].frame_id == labels[i].frame_id);
      if (seq[i] != U) CHECK(filled[i].label == seq[i]);
    }
  }
}

TEST_CASE("event segmentation") {
  CHECK(segment_events(make_labels({U, U})).empty());

  const auto events = segment_events(make_labels({"A", "A", "A", "B", "B"}));
  REQUIRE(events.size() == 2);
  CHECK(events[0].scene == "A");
  CHECK(events[0].duration_seconds() == 60.0);
  CHECK(events[0].frame_ids == std::vector<std::string>{"f0", "f1", "f2"});
  CHECK(events[1].scene == "B");
  CHECK(events[1].duration_seconds() == 30.0);

  const auto single = segment_events(make_labels({U, "A", U}));
  REQUIRE(single.size() == 1);
  CHECK(single[0].duration_seconds() == 0.0);
  CHECK(single[0].frame_ids.size() == 1);
}

TEST_CASE("events partition the labelled frames") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> pick(0, 3);
  const std::vector<std::string> alphabet{"A", "B", U, U};
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::string> seq(40);
    for (auto& s : seq) s = alphabet[static_cast<std::size_t>(pick(rng))];
    const auto labels = make_labels(seq);
    const auto events = segment_events(labels);
    std::vector<std::string> flattened, expected;
    double total = 0.0;
    for (const auto& e : events) {
      CHECK(e.start <= e.end);
      total += e.duration_seconds();
      flattened.insert(flattened.end(), e.frame_ids.begin(), e.frame_ids.end());
    }
    for (const auto& l : labels) {
      if (!l.is_unknown()) expected.push_back(l.frame_id);
    }
    CHECK(flattened == expected);
    CHECK(total <= 30.0 * 39);
  }
}
