#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mediff/core_model.hpp"
#include "mediff/errors.hpp"
#include "mediff/format.hpp"
#include "mediff/time.hpp"

namespace mediff {

// Series CSV: header "timestamp,value", RFC 3339 timestamps strictly
// increasing at one constant period, empty value = MISSING. A one-row file
// takes `default_period`.
inline TimeSeries parse_series_csv(std::istream& in, Duration default_period = std::chrono::minutes{1}) {
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& msg) { return ParseError("line " + std::to_string(line_no) + ": " + msg); };

  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) return true;
    }
    return false;
  };

  if (!next_line()) throw ParseError("line 1: empty input, expected header 'timestamp,value'");
  if (line != "timestamp,value") throw fail("expected header 'timestamp,value', got '" + line + "'");

  std::vector<Instant> times;
  std::vector<double> values;
  while (next_line()) {
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      throw fail("expected exactly two fields");
    }
    Instant t;
    try {
      t = parse_rfc3339(std::string_view(line).substr(0, comma));
    } catch (const ParseError& e) {
      throw fail(e.what());
    }
    double v = 0;
    if (!parse_number(std::string_view(line).substr(comma + 1), v)) {
      throw fail("invalid value '" + line.substr(comma + 1) + "'");
    }
    if (!times.empty()) {
      if (t <= times.back()) throw fail("timestamps must be strictly increasing");
      if (times.size() >= 2 && t - times.back() != times[1] - times[0]) {
        throw fail("sampling period changes (expected " + std::to_string((times[1] - times[0]).count()) + " s)");
      }
    }
    times.push_back(t);
    values.push_back(v);
  }
  if (times.empty()) throw ParseError("line " + std::to_string(line_no) + ": no data rows");
  const Duration period = times.size() >= 2 ? times[1] - times[0] : default_period;
  return TimeSeries(times.front(), std::move(values), period);
}

inline void write_series_csv(std::ostream& os, const TimeSeries& y) {
  os << "timestamp,value\n";
  for (std::size_t k = 1; k <= y.length(); ++k) os << format_rfc3339(y.time_at(k)) << ',' << format_number(y.value(k)) << '\n';
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline TimeSeries load_series_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path.string() + "'");
  try {
    return parse_series_csv(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

// Writes to a sibling temporary file, then renames over the target.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw UsageError("cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw UsageError("write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace mediff
