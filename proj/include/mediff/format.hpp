#pragma once

#include <charconv>
#include <string>
#include <string_view>
#include <system_error>

#include "mediff/core_model.hpp"

namespace mediff {

// Shortest decimal text that parses back to the same double; MISSING is "".
inline std::string format_number(double v) {
  if (is_missing(v)) return {};
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// Empty text is MISSING; anything else must be a complete finite number.
inline bool parse_number(std::string_view text, double& out) {
  if (text.empty()) {
    out = kMissing;
    return true;
  }
  if (text.front() == '+') text.remove_prefix(1);
  const auto res = std::from_chars(text.data(), text.data() + text.size(), out);
  return res.ec == std::errc{} && res.ptr == text.data() + text.size() && std::isfinite(out);
}

}  // namespace mediff
