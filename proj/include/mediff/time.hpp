#pragma once

#include <chrono>
#include <cstdio>
#include <string>
#include <string_view>

#include "mediff/errors.hpp"

namespace mediff {

using Instant = std::chrono::sys_seconds;
using Duration = std::chrono::seconds;

// Parses an RFC 3339 timestamp with second resolution, e.g.
// "2024-03-10T02:00:00Z" or "2024-03-10T02:00:00-05:00". A fractional
// second part is accepted only when it is all zeros.
inline Instant parse_rfc3339(std::string_view text) {
  auto fail = [&]() -> ParseError {
    return ParseError("invalid RFC 3339 timestamp '" + std::string(text) + "'");
  };
  auto digits = [&](std::size_t pos, std::size_t count) {
    if (pos + count > text.size()) throw fail();
    int v = 0;
    for (std::size_t i = pos; i < pos + count; ++i) {
      const char c = text[i];
      if (c < '0' || c > '9') throw fail();
      v = v * 10 + (c - '0');
    }
    return v;
  };
  auto expect = [&](std::size_t pos, char c) {
    if (pos >= text.size() || (text[pos] != c && !(c == 'T' && (text[pos] == 't' || text[pos] == ' ')))) {
      throw fail();
    }
  };

  const int year = digits(0, 4);
  expect(4, '-');
  const int month = digits(5, 2);
  expect(7, '-');
  const int day = digits(8, 2);
  expect(10, 'T');
  const int hour = digits(11, 2);
  expect(13, ':');
  const int minute = digits(14, 2);
  expect(16, ':');
  const int second = digits(17, 2);
  std::size_t pos = 19;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    const std::size_t frac_start = pos;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
      if (text[pos] != '0') throw ParseError("sub-second timestamp not supported: '" + std::string(text) + "'");
      ++pos;
    }
    if (pos == frac_start) throw fail();
  }
  if (pos >= text.size()) throw fail();

  int offset_seconds = 0;
  if (text[pos] == 'Z' || text[pos] == 'z') {
    ++pos;
  } else if (text[pos] == '+' || text[pos] == '-') {
    const int sign = text[pos] == '+' ? 1 : -1;
    const int oh = digits(pos + 1, 2);
    expect(pos + 3, ':');
    const int om = digits(pos + 4, 2);
    if (oh > 23 || om > 59) throw fail();
    offset_seconds = sign * (oh * 3600 + om * 60);
    pos += 6;
  } else {
    throw fail();
  }
  if (pos != text.size()) throw fail();

  const std::chrono::year_month_day ymd{std::chrono::year{year}, std::chrono::month{static_cast<unsigned>(month)},
                                        std::chrono::day{static_cast<unsigned>(day)}};
  if (!ymd.ok() || hour > 23 || minute > 59 || second > 59) throw fail();

  const auto days = std::chrono::sys_days{ymd};
  return Instant{days} + std::chrono::hours{hour} + std::chrono::minutes{minute} + std::chrono::seconds{second} -
         std::chrono::seconds{offset_seconds};
}

// Always emits the UTC "Z" form.
inline std::string format_rfc3339(Instant t) {
  const auto days = std::chrono::floor<std::chrono::days>(t);
  const std::chrono::year_month_day ymd{days};
  const std::chrono::hh_mm_ss hms{t - days};
  char buf[40];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

}  // namespace mediff
