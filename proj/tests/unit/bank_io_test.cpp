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
#include <fstream>
#include <json.hpp>
#include <random>

#include "cosfire/bank_io.hpp"
#include "cosfire/error.hpp"
#include "support/fixtures.hpp"

using namespace cosfire;
using cosfire::testing::random_bank;

namespace {

std::string error_of(const std::string& text) {
  try {
    bank_from_json(text);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("bank with 8 and 3 filters round-trips exactly") {
  const SceneBank bank = random_bank(5, {8, 3});
  const SceneBank back = bank_from_json(bank_to_json(bank));
  CHECK(back == bank);
  CHECK(back.scenes[0].filters.size() == 8);
  CHECK(back.scenes[1].filters.size() == 3);
  CHECK(bank_to_json(back) == bank_to_json(bank));

  namespace fs = std::filesystem;
  const fs::path path = fs::temp_directory_path() / "cosfire_bank_test.json";
  save_bank(bank, path);
  CHECK(load_bank(path) == bank);
  fs::remove(path);
}

TEST_CASE("empty bank round-trips") {
  SceneBank bank;
  bank.inhibition.reset();
  const SceneBank back = bank_from_json(bank_to_json(bank));
  CHECK(back.scenes.empty());
  CHECK_FALSE(back.inhibition.has_value());
  CHECK(back == bank);
}

TEST_CASE("file layout") {
  const auto doc = nlohmann::json::parse(bank_to_json(random_bank(1, {2})));
  CHECK(doc["version"] == kBankFormatVersion);
  CHECK(doc["bank"]["lambdas"].size() == 5);
  const auto& f0 = doc["scenes"][0]["filters"][0];
  CHECK(f0["weight_sigma"] == "uniform");
  CHECK(f0["tuples"][0].size() == 4);
  CHECK(doc["scenes"][0]["filters"][1]["weight_sigma"].is_number());
}

TEST_CASE("malformed files are rejected with context") {
  const std::string good = bank_to_json(random_bank(2, {1}));

  SUBCASE("syntax error names the line") {
    std::string broken = good;
    broken.insert(broken.find("\"scenes\""), "\n\n  oops,");
    const std::string msg = error_of(broken);
    CHECK(msg.find("line") != std::string::npos);
    CHECK_THROWS_AS(bank_from_json(broken), ParseError);
  }
  SUBCASE("version mismatch") {
    auto doc = nlohmann::json::parse(good);
    doc["version"] = 2;
    CHECK_THROWS_AS(bank_from_json(doc.dump()), VersionError);
  }
  SUBCASE("negative radius") {
    auto doc = nlohmann::json::parse(good);
    doc["scenes"][0]["filters"][0]["tuples"][0][2] = -1;
    CHECK_THROWS_AS(bank_from_json(doc.dump()), InvariantViolation);
  }
  SUBCASE("missing field names its path") {
    auto doc = nlohmann::json::parse(good);
    doc["scenes"][0]["filters"][0].erase("t3");
    const std::string msg = error_of(doc.dump());
    CHECK(msg.find("t3") != std::string::npos);
    CHECK(msg.find("scenes[0].filters[0]") != std::string::npos);
  }
  SUBCASE("wrong type") {
    auto doc = nlohmann::json::parse(good);
    doc["scenes"][0]["detection_threshold"] = "high";
    CHECK_THROWS_AS(bank_from_json(doc.dump()), ParseError);
  }
  CHECK_THROWS_AS(load_bank("/nonexistent/bank.json"), Error);
}
