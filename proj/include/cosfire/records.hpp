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

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cosfire/metrics.hpp"
#include "cosfire/scene.hpp"
#include "cosfire/timeline.hpp"

namespace cosfire {

// Minimal RFC 4180 reader. Blank lines and lines starting with '#' are
// skipped; every row must have as many fields as the header.
struct CsvRow {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<CsvRow> rows;
};

CsvTable read_csv(std::istream& in, std::string_view source);
CsvTable read_csv_file(const std::filesystem::path& path);

std::string csv_field(std::string_view value);

// frame_id,path,timestamp; relative paths resolve against the manifest's
// directory.
struct ManifestEntry {
  std::string frame_id;
  std::filesystem::path path;
  Timestamp timestamp{};
};

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);
void write_manifest(std::ostream& out, std::span<const ManifestEntry> entries);

// frame_id,timestamp,label,<scene>_count,<scene>_max,...
struct LabelTable {
  std::vector<std::string> scenes;
  std::vector<FrameLabel> labels;
};

void write_labels(std::ostream& out, const LabelTable& table);
LabelTable read_labels(const std::filesystem::path& path);

// frame_id,label
std::vector<TruthEntry> read_truth(const std::filesystem::path& path);
void write_truth(std::ostream& out, std::span<const TruthEntry> truth);

// scene,start,end,duration_seconds,n_frames
void write_events(std::ostream& out, std::span<const EventSegment> events);

}  // namespace cosfire
