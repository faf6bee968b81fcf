// Copyright 2026 The drivescope Authors
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

// Wall-clock handling for trip start times: RFC 3339 parsing/formatting,
// local calendar fields and ISO-8601 week numbering.

#include <chrono>
#include <cstdio>
#include <string>
#include <string_view>

#include "drivescope/error.hpp"

namespace drivescope {

struct WallClock {
  std::chrono::sys_time<std::chrono::milliseconds> utc{};
  int offset_minutes = 0;  // local = utc + offset

  friend bool operator==(const WallClock&, const WallClock&) = default;
};

struct IsoWeek {
  int year = 0;
  unsigned week = 0;
  friend auto operator<=>(const IsoWeek&, const IsoWeek&) = default;
};

namespace detail {

inline int parse_digits(std::string_view s, std::size_t pos, std::size_t n) {
  if (pos + n > s.size()) throw InputError("truncated timestamp: " + std::string(s));
  int v = 0;
  for (std::size_t i = pos; i < pos + n; ++i) {
    if (s[i] < '0' || s[i] > '9') throw InputError("bad digit in timestamp: " + std::string(s));
    v = v * 10 + (s[i] - '0');
  }
  return v;
}

inline void expect_char(std::string_view s, std::size_t pos, char c) {
  if (pos >= s.size() || s[pos] != c) throw InputError("malformed timestamp: " + std::string(s));
}

}  // namespace detail

// Accepts YYYY-MM-DDTHH:MM:SS[.fff...](Z|+hh:mm|-hh:mm); 't', ' ' and 'z' are
// accepted as in RFC 3339. Fractions beyond milliseconds are truncated.
inline WallClock parse_rfc3339(std::string_view s) {
  using namespace std::chrono;
  const int y = detail::parse_digits(s, 0, 4);
  detail::expect_char(s, 4, '-');
  const int mo = detail::parse_digits(s, 5, 2);
  detail::expect_char(s, 7, '-');
  const int d = detail::parse_digits(s, 8, 2);
  if (s.size() < 11 || (s[10] != 'T' && s[10] != 't' && s[10] != ' '))
    throw InputError("malformed timestamp: " + std::string(s));
  const int hh = detail::parse_digits(s, 11, 2);
  detail::expect_char(s, 13, ':');
  const int mm = detail::parse_digits(s, 14, 2);
  detail::expect_char(s, 16, ':');
  const int ss = detail::parse_digits(s, 17, 2);
  std::size_t pos = 19;
  int millis = 0;
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    int scale = 100;
    const std::size_t start = pos;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
      millis += (s[pos] - '0') * scale;
      scale /= 10;
      ++pos;
    }
    if (pos == start) throw InputError("empty fraction in timestamp: " + std::string(s));
  }
  int offset = 0;
  if (pos >= s.size()) throw InputError("timestamp lacks a UTC offset: " + std::string(s));
  if (s[pos] == 'Z' || s[pos] == 'z') {
    ++pos;
  } else if (s[pos] == '+' || s[pos] == '-') {
    const int sign = s[pos] == '-' ? -1 : 1;
    const int oh = detail::parse_digits(s, pos + 1, 2);
    detail::expect_char(s, pos + 3, ':');
    const int om = detail::parse_digits(s, pos + 4, 2);
    offset = sign * (oh * 60 + om);
    pos += 6;
  } else {
    throw InputError("malformed UTC offset: " + std::string(s));
  }
  if (pos != s.size()) throw InputError("trailing characters in timestamp: " + std::string(s));

  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || hh > 23 || mm > 59 || ss > 60)
    throw InputError("invalid calendar value in timestamp: " + std::string(s));
  const auto local = sys_days{ymd} + hours{hh} + minutes{mm} + seconds{ss} + milliseconds{millis};
  return WallClock{local - minutes{offset}, offset};
}

inline std::chrono::sys_time<std::chrono::milliseconds> local_time(const WallClock& c) {
  return c.utc + std::chrono::minutes{c.offset_minutes};
}

inline std::string format_rfc3339(const WallClock& c) {
  using namespace std::chrono;
  const auto local = local_time(c);
  const auto day_point = floor<days>(local);
  const year_month_day ymd{day_point};
  const hh_mm_ss tod{local - day_point};
  char buf[64];
  int n = std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d", static_cast<int>(ymd.year()),
                        static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                        static_cast<int>(tod.hours().count()), static_cast<int>(tod.minutes().count()),
                        static_cast<int>(tod.seconds().count()));
  std::string out(buf, static_cast<std::size_t>(n));
  if (const auto ms = tod.subseconds().count(); ms != 0) {
    std::snprintf(buf, sizeof buf, ".%03d", static_cast<int>(ms));
    out += buf;
  }
  if (c.offset_minutes == 0) {
    out += 'Z';
  } else {
    const int a = c.offset_minutes < 0 ? -c.offset_minutes : c.offset_minutes;
    std::snprintf(buf, sizeof buf, "%c%02d:%02d", c.offset_minutes < 0 ? '-' : '+', a / 60, a % 60);
    out += buf;
  }
  return out;
}

inline std::chrono::year_month_day local_date(const WallClock& c) {
  return std::chrono::year_month_day{std::chrono::floor<std::chrono::days>(local_time(c))};
}

// Seconds since local midnight.
inline double local_seconds_of_day(const WallClock& c) {
  const auto local = local_time(c);
  const auto since = local - std::chrono::floor<std::chrono::days>(local);
  return std::chrono::duration<double>(since).count();
}

// ISO-8601: weeks start on Monday; week 1 contains the year's first Thursday.
inline IsoWeek iso_week(std::chrono::sys_days d) {
  using namespace std::chrono;
  const unsigned wd = weekday{d}.iso_encoding();  // Mon=1 .. Sun=7
  const sys_days thursday = d + days{4 - static_cast<int>(wd)};
  const year iso_year = year_month_day{thursday}.year();
  const sys_days jan1 = sys_days{iso_year / January / 1};
  const auto week = static_cast<unsigned>((thursday - jan1).count() / 7 + 1);
  return IsoWeek{static_cast<int>(iso_year), week};
}

inline IsoWeek iso_week(const WallClock& c) { return iso_week(std::chrono::sys_days{local_date(c)}); }

inline std::string format_iso_week(const IsoWeek& w) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-W%02u", w.year, w.week);
  return buf;
}

inline std::string format_month(const WallClock& c) {
  const auto ymd = local_date(c);
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u", static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()));
  return buf;
}

inline std::string format_date(const WallClock& c) {
  const auto ymd = local_date(c);
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

}  // namespace drivescope
