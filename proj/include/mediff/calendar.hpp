#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mediff/errors.hpp"
#include "mediff/time.hpp"

namespace mediff {

struct Holiday {
  Instant start;
  Instant end;
  std::string label;

  friend bool operator==(const Holiday&, const Holiday&) = default;
};

// Server-side record of DST transitions and holiday/event ranges.
//
// File format (JSON):
//   {
//     "dst_transitions": ["2024-03-10T07:00:00Z", ...],
//     "dst_effect_duration_seconds": 604800,          // optional
//     "holidays": [{"start": "...", "end": "...", "label": "..."}, ...]
//   }
// When the effect duration is absent, a transition affects one season
// (season length times sample period) after the instant it happens.
struct CalendarConfig {
  std::vector<Instant> dst_transitions;
  std::optional<Duration> dst_effect_duration;
  std::vector<Holiday> holidays;

  void validate() const {
    if (!std::is_sorted(dst_transitions.begin(), dst_transitions.end())) {
      throw UsageError("calendar: dst_transitions must be sorted ascending");
    }
    if (dst_effect_duration && dst_effect_duration->count() < 0) {
      throw UsageError("calendar: dst_effect_duration must be non-negative");
    }
    for (const auto& h : holidays) {
      if (h.end < h.start) throw UsageError("calendar: holiday '" + h.label + "' ends before it starts");
    }
    if (!std::is_sorted(holidays.begin(), holidays.end(),
                        [](const Holiday& a, const Holiday& b) { return a.start < b.start; })) {
      throw UsageError("calendar: holidays must be sorted by start");
    }
  }

  bool empty() const noexcept { return dst_transitions.empty() && holidays.empty(); }

  friend bool operator==(const CalendarConfig&, const CalendarConfig&) = default;
};

struct TimeSpan {
  Instant start;
  Instant end;

  bool intersects(Instant a, Instant b) const noexcept { return a <= end && start <= b; }
};

struct EffectResolution {
  double beta = 1.0;
  int gamma = 0;
  std::vector<std::string> reasons;

  friend bool operator==(const EffectResolution&, const EffectResolution&) = default;
};

// beta applies while any transition's effect window [t, t + duration]
// overlaps the span; gamma = 1 needs both the request and an overlapping
// holiday.
inline EffectResolution resolve_effects(const TimeSpan& span, const CalendarConfig& calendar, double configured_beta,
                                        int requested_gamma,
                                        Duration fallback_dst_effect = std::chrono::days{7}) {
  if (span.end < span.start) throw UsageError("batch span ends before it starts");
  EffectResolution out;
  const Duration effect = calendar.dst_effect_duration.value_or(fallback_dst_effect);
  for (const Instant t : calendar.dst_transitions) {
    if (span.intersects(t, t + effect)) {
      out.beta = configured_beta;
      out.reasons.push_back("dst:" + format_rfc3339(t));
    }
  }
  for (const auto& h : calendar.holidays) {
    if (span.intersects(h.start, h.end)) {
      if (requested_gamma == 1) out.gamma = 1;
      out.reasons.push_back("holiday:" + h.label);
    }
  }
  return out;
}

inline nlohmann::json calendar_to_json(const CalendarConfig& calendar) {
  nlohmann::json j;
  j["dst_transitions"] = nlohmann::json::array();
  for (const Instant t : calendar.dst_transitions) j["dst_transitions"].push_back(format_rfc3339(t));
  if (calendar.dst_effect_duration) j["dst_effect_duration_seconds"] = calendar.dst_effect_duration->count();
  j["holidays"] = nlohmann::json::array();
  for (const auto& h : calendar.holidays) {
    j["holidays"].push_back({{"start", format_rfc3339(h.start)}, {"end", format_rfc3339(h.end)}, {"label", h.label}});
  }
  return j;
}

inline CalendarConfig calendar_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("calendar: top-level value must be an object");
  CalendarConfig cal;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "dst_transitions") {
        for (const auto& t : value) cal.dst_transitions.push_back(parse_rfc3339(t.get<std::string>()));
      } else if (key == "dst_effect_duration_seconds") {
        cal.dst_effect_duration = Duration{value.get<long long>()};
      } else if (key == "holidays") {
        for (const auto& h : value) {
          cal.holidays.push_back({parse_rfc3339(h.at("start").get<std::string>()),
                                  parse_rfc3339(h.at("end").get<std::string>()), h.value("label", std::string{})});
        }
      } else {
        throw ParseError("calendar: unknown key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("calendar: ") + e.what());
  }
  cal.validate();
  return cal;
}

inline std::string serialize_calendar(const CalendarConfig& calendar) { return calendar_to_json(calendar).dump(2) + "\n"; }

inline CalendarConfig parse_calendar(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("calendar: ") + e.what());
  }
  return calendar_from_json(j);
}

}  // namespace mediff
