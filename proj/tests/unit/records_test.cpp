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
#include <sstream>

#include "cosfire/error.hpp"
#include "cosfire/records.hpp"
#include "cosfire/timestamp.hpp"
#include "support/oracles.hpp"

using namespace cosfire;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / "cosfire_records_test") {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(path / name) << text;
    return path / name;
  }
};

std::string parse_error(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ParseError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("timestamps") {
  const Timestamp t = parse_timestamp("2016-03-01T08:30:15Z");
  CHECK(format_timestamp(t) == "2016-03-01T08:30:15Z");
  CHECK(parse_timestamp("2016-03-01T08:30:15+00:00") == t);
  CHECK(parse_timestamp("2016-03-01T08:30:45Z") - t == std::chrono::seconds{30});
  CHECK(t.time_since_epoch().count() == 1456821015);
  CHECK(parse_timestamp("2016-03-01 08:30:15Z") == t);
  for (const char* bad : {"2016-03-01_08:30:15Z", "2016-02-30T00:00:00Z", "2016-03-01T08:30:15",
                          "2016-03-01T08:30:15+01:00", "2016-03-01T25:00:00Z", ""}) {
    CHECK_THROWS_AS(parse_timestamp(bad), ParseError);
  }
}

TEST_CASE("csv reader") {
  std::istringstream in(
      "# comment\n"
      "a,b,c\n"
      "\n"
      "1,\"x, y\",\"say \"\"hi\"\"\"\n"
      "2,,z\n");
  const CsvTable t = read_csv(in, "mem");
  CHECK(t.header == std::vector<std::string>{"a", "b", "c"});
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0].fields == std::vector<std::string>{"1", "x, y", "say \"hi\""});
  CHECK(t.rows[0].line == 4);
  CHECK(t.rows[1].fields[1].empty());

  std::istringstream ragged("a,b\n1,2\n3\n");
  const std::string msg = parse_error([&] { read_csv(ragged, "ragged.csv"); });
  CHECK(msg.find("ragged.csv") != std::string::npos);
  CHECK(msg.find("line 3") != std::string::npos);

  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("q\"") == "\"q\"\"\"");
}

TEST_CASE("manifest") {
  TempDir dir;
  fs::create_directories(dir.path / "frames");
  const fs::path m = dir.write("manifest.csv",
                               "frame_id,path,timestamp\n"
                               "a,frames/a.png,2016-03-01T08:00:00Z\n"
                               "b,/abs/b.png,2016-03-01T08:00:30Z\n");
  const auto entries = read_manifest(m);
  REQUIRE(entries.size() == 2);
  CHECK(entries[0].path == dir.path / "frames/a.png");
  CHECK(entries[1].path == fs::path("/abs/b.png"));
  CHECK(entries[1].timestamp - entries[0].timestamp == std::chrono::seconds{30});

  std::ostringstream out;
  write_manifest(out, entries);
  CHECK(out.str().rfind("frame_id,path,timestamp\n", 0) == 0);

  const fs::path unsorted = dir.write("u.csv",
                                      "frame_id,path,timestamp\n"
                                      "a,a.png,2016-03-01T08:00:30Z\n"
                                      "b,b.png,2016-03-01T08:00:00Z\n");
  CHECK(parse_error([&] { read_manifest(unsorted); }).find("line 3") != std::string::npos);
  const fs::path header = dir.write("h.csv", "id,path,time\n");
  CHECK_THROWS_AS(read_manifest(header), ParseError);
  const fs::path stamp = dir.write("s.csv", "frame_id,path,timestamp\na,a.png,yesterday\n");
  CHECK(parse_error([&] { read_manifest(stamp); }).find("line 2") != std::string::npos);
  CHECK(read_manifest(dir.write("e.csv", "frame_id,path,timestamp\n")).empty());
}

TEST_CASE("label table round-trip") {
  LabelTable table;
  table.scenes = {"CoffeeCorner", "Working"};
  table.labels = cosfire::testing::make_labels({"CoffeeCorner", "unknown", "Working"});
  for (auto& l : table.labels) {
    l.votes = {{"CoffeeCorner", 3, 0.1 + 1.0 / 3.0}, {"Working", 0, 2.0 / 7.0}};
  }
  TempDir dir;
  std::ofstream(dir.path / "labels.csv") << "# generated_at 2026-01-01T00:00:00Z\n";
  {
    std::ofstream out(dir.path / "labels.csv", std::ios::app);
    write_labels(out, table);
  }
  const LabelTable back = read_labels(dir.path / "labels.csv");
  CHECK(back.scenes == table.scenes);
  CHECK(back.labels == table.labels);

  const fs::path bad = dir.write("bad.csv", "frame_id,timestamp,label,A_count\n");
  CHECK_THROWS_AS(read_labels(bad), ParseError);
  const fs::path bad_count =
      dir.write("bc.csv", "frame_id,timestamp,label,A_count,A_max\nf,2016-03-01T08:00:00Z,A,x,1\n");
  CHECK(parse_error([&] { read_labels(bad_count); }).find("line 2") != std::string::npos);
}

TEST_CASE("truth and events files") {
  TempDir dir;
  const std::vector<TruthEntry> truth{{"a", "CoffeeCorner"}, {"b", "unknown"}};
  {
    std::ofstream out(dir.path / "truth.csv");
    write_truth(out, truth);
  }
  const auto back = read_truth(dir.path / "truth.csv");
  REQUIRE(back.size() == 2);
  CHECK(back[1].frame_id == "b");
  CHECK(back[1].label == "unknown");

  EventSegment e{"Working", parse_timestamp("2016-03-01T08:00:00Z"),
                 parse_timestamp("2016-03-01T08:01:00Z"), {"x", "y", "z"}};
  std::ostringstream out;
  write_events(out, std::vector<EventSegment>{e});
  CHECK(out.str() ==
        "scene,start,end,duration_seconds,n_frames\n"
        "Working,2016-03-01T08:00:00Z,2016-03-01T08:01:00Z,60,3\n");
}
