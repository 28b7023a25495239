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

#include "cosfire/timestamp.hpp"

#include <charconv>
#include <cstdio>

#include "cosfire/error.hpp"

namespace cosfire {

namespace {

int field(std::string_view text, std::size_t pos, std::size_t len) {
  int v = 0;
  const auto* first = text.data() + pos;
  const auto [ptr, ec] = std::from_chars(first, first + len, v);
  if (ec != std::errc{} || ptr != first + len) {
    throw ParseError("malformed timestamp '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace

Timestamp parse_timestamp(std::string_view text) {
  using namespace std::chrono;
  const auto bad = [&] {
    return ParseError("malformed timestamp '" + std::string(text) +
                      "' (expected YYYY-MM-DDTHH:MM:SSZ)");
  };
  if (text.size() < 19 || text[4] != '-' || text[7] != '-' ||
      (text[10] != 'T' && text[10] != ' ') || text[13] != ':' || text[16] != ':') {
    throw bad();
  }
  const std::string_view zone = text.substr(19);
  if (zone != "Z" && zone != "+00:00") throw bad();

  const year_month_day date{year{field(text, 0, 4)},
                            month{static_cast<unsigned>(field(text, 5, 2))},
                            day{static_cast<unsigned>(field(text, 8, 2))}};
  const int h = field(text, 11, 2);
  const int m = field(text, 14, 2);
  const int s = field(text, 17, 2);
  if (!date.ok() || h > 23 || m > 59 || s > 60) throw bad();
  return sys_days{date} + hours{h} + minutes{m} + seconds{s};
}

std::string format_timestamp(Timestamp t) {
  using namespace std::chrono;
  const auto day_point = floor<days>(t);
  const year_month_day date{day_point};
  const hh_mm_ss time{t - day_point};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ",
                static_cast<int>(date.year()), static_cast<unsigned>(date.month()),
                static_cast<unsigned>(date.day()), static_cast<int>(time.hours().count()),
                static_cast<int>(time.minutes().count()),
                static_cast<int>(time.seconds().count()));
  return buf;
}

}  // namespace cosfire
