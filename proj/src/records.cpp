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

#include "cosfire/records.hpp"

#include <fmt/format.h>

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include "cosfire/error.hpp"

namespace cosfire {

namespace {

[[noreturn]] void row_error(std::string_view source, std::size_t line, const std::string& what) {
  throw ParseError(fmt::format("{}, line {}: {}", source, line, what));
}

std::vector<std::string> split_record(const std::string& text, std::string_view source,
                                      std::size_t line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          current += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current += c;
      }
    } else if (c == '"') {
      if (!current.empty() || was_quoted) row_error(source, line, "stray quote");
      quoted = was_quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
      was_quoted = false;
    } else {
      if (was_quoted) row_error(source, line, "text after closing quote");
      current += c;
    }
  }
  if (quoted) row_error(source, line, "unterminated quote");
  fields.push_back(std::move(current));
  return fields;
}

int parse_int(const std::string& text, std::string_view source, std::size_t line,
              std::string_view column) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    row_error(source, line, fmt::format("column '{}': expected an integer, got '{}'", column, text));
  }
  return v;
}

double parse_double(const std::string& text, std::string_view source, std::size_t line,
                    std::string_view column) {
  double v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    row_error(source, line, fmt::format("column '{}': expected a number, got '{}'", column, text));
  }
  return v;
}

Timestamp parse_time(const std::string& text, std::string_view source, std::size_t line) {
  try {
    return parse_timestamp(text);
  } catch (const ParseError& e) {
    row_error(source, line, e.what());
  }
}

void expect_header(const CsvTable& table, const std::vector<std::string>& expected,
                   std::string_view source) {
  if (table.header != expected) {
    std::string want;
    for (const auto& h : expected) want += (want.empty() ? "" : ",") + h;
    throw ParseError(fmt::format("{}: expected header '{}'", source, want));
  }
}

std::ifstream open(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot read " + path.string());
  return in;
}

}  // namespace

CsvTable read_csv(std::istream& in, std::string_view source) {
  CsvTable table;
  std::string text;
  std::size_t line = 0;
  bool have_header = false;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.empty() || text.front() == '#') continue;
    auto fields = split_record(text, source, line);
    if (!have_header) {
      table.header = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != table.header.size()) {
      row_error(source, line,
                fmt::format("expected {} fields, found {}", table.header.size(), fields.size()));
    }
    table.rows.push_back({line, std::move(fields)});
  }
  if (!have_header) throw ParseError(fmt::format("{}: missing header row", source));
  return table;
}

CsvTable read_csv_file(const std::filesystem::path& path) {
  auto in = open(path);
  return read_csv(in, path.string());
}

std::string csv_field(std::string_view value) {
  if (value.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(value);
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path) {
  const CsvTable table = read_csv_file(path);
  const std::string source = path.string();
  expect_header(table, {"frame_id", "path", "timestamp"}, source);
  std::vector<ManifestEntry> entries;
  for (const auto& row : table.rows) {
    ManifestEntry e{row.fields[0], row.fields[1], parse_time(row.fields[2], source, row.line)};
    if (e.frame_id.empty()) row_error(source, row.line, "empty frame_id");
    if (e.path.is_relative()) e.path = path.parent_path() / e.path;
    if (!entries.empty() && e.timestamp < entries.back().timestamp) {
      row_error(source, row.line, "timestamps must be non-decreasing");
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

void write_manifest(std::ostream& out, std::span<const ManifestEntry> entries) {
  out << "frame_id,path,timestamp\n";
  for (const auto& e : entries) {
    out << csv_field(e.frame_id) << ',' << csv_field(e.path.generic_string()) << ','
        << format_timestamp(e.timestamp) << '\n';
  }
}

void write_labels(std::ostream& out, const LabelTable& table) {
  out << "frame_id,timestamp,label";
  for (const auto& s : table.scenes) out << ',' << csv_field(s + "_count") << ',' << csv_field(s + "_max");
  out << '\n';
  for (const auto& f : table.labels) {
    out << csv_field(f.frame_id) << ',' << format_timestamp(f.timestamp) << ','
        << csv_field(f.label);
    for (const auto& s : table.scenes) {
      const auto it = std::find_if(f.votes.begin(), f.votes.end(),
                                   [&](const SceneVote& v) { return v.scene == s; });
      const SceneVote vote = it == f.votes.end() ? SceneVote{s} : *it;
      out << ',' << vote.count << ',' << fmt::format("{}", vote.max_response);
    }
    out << '\n';
  }
}

LabelTable read_labels(const std::filesystem::path& path) {
  const CsvTable table = read_csv_file(path);
  const std::string source = path.string();
  const auto& h = table.header;
  if (h.size() < 3 || h[0] != "frame_id" || h[1] != "timestamp" || h[2] != "label" ||
      (h.size() - 3) % 2 != 0) {
    throw ParseError(source + ": expected header 'frame_id,timestamp,label[,<scene>_count,<scene>_max]...'");
  }
  LabelTable out;
  for (std::size_t c = 3; c < h.size(); c += 2) {
    constexpr std::string_view kCount = "_count";
    constexpr std::string_view kMax = "_max";
    const std::string& count = h[c];
    const std::string& max = h[c + 1];
    if (count.size() <= kCount.size() || !count.ends_with(kCount)) {
      throw ParseError(fmt::format("{}: column {} must be '<scene>_count'", source, c + 1));
    }
    const std::string scene = count.substr(0, count.size() - kCount.size());
    if (max != scene + std::string(kMax)) {
      throw ParseError(fmt::format("{}: column {} must be '{}_max'", source, c + 2, scene));
    }
    out.scenes.push_back(scene);
  }
  for (const auto& row : table.rows) {
    FrameLabel f;
    f.frame_id = row.fields[0];
    f.timestamp = parse_time(row.fields[1], source, row.line);
    f.label = row.fields[2];
    if (f.frame_id.empty()) row_error(source, row.line, "empty frame_id");
    if (f.label.empty()) row_error(source, row.line, "empty label");
    if (f.label != kUnknownLabel &&
        std::find(out.scenes.begin(), out.scenes.end(), f.label) == out.scenes.end() &&
        !out.scenes.empty()) {
      row_error(source, row.line, "label '" + f.label + "' is not a scene column");
    }
    for (std::size_t s = 0; s < out.scenes.size(); ++s) {
      SceneVote v{out.scenes[s]};
      v.count = parse_int(row.fields[3 + 2 * s], source, row.line, h[3 + 2 * s]);
      v.max_response = parse_double(row.fields[4 + 2 * s], source, row.line, h[4 + 2 * s]);
      if (v.count < 0 || v.max_response < 0) row_error(source, row.line, "negative vote");
      f.votes.push_back(std::move(v));
    }
    if (!out.labels.empty() && f.timestamp < out.labels.back().timestamp) {
      row_error(source, row.line, "timestamps must be non-decreasing");
    }
    out.labels.push_back(std::move(f));
  }
  return out;
}

std::vector<TruthEntry> read_truth(const std::filesystem::path& path) {
  const CsvTable table = read_csv_file(path);
  expect_header(table, {"frame_id", "label"}, path.string());
  std::vector<TruthEntry> out;
  for (const auto& row : table.rows) {
    if (row.fields[0].empty() || row.fields[1].empty()) {
      row_error(path.string(), row.line, "empty field");
    }
    out.push_back({row.fields[0], row.fields[1]});
  }
  return out;
}

void write_truth(std::ostream& out, std::span<const TruthEntry> truth) {
  out << "frame_id,label\n";
  for (const auto& t : truth) out << csv_field(t.frame_id) << ',' << csv_field(t.label) << '\n';
}

void write_events(std::ostream& out, std::span<const EventSegment> events) {
  out << "scene,start,end,duration_seconds,n_frames\n";
  for (const auto& e : events) {
    out << csv_field(e.scene) << ',' << format_timestamp(e.start) << ','
        << format_timestamp(e.end) << ',' << fmt::format("{}", e.duration_seconds()) << ','
        << e.frame_ids.size() << '\n';
  }
}

}  // namespace cosfire
