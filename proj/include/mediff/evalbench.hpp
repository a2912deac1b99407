#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mediff/calendar.hpp"
#include "mediff/core_model.hpp"
#include "mediff/errors.hpp"
#include "mediff/format.hpp"
#include "mediff/time.hpp"

namespace mediff {

// ---------------------------------------------------------------- scoring --

struct LabelSet {
  std::string series_id;
  std::vector<std::size_t> labels;  // 1-based first index of each event, strictly increasing

  void validate(std::size_t series_length) const {
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] < 1 || labels[i] > series_length) {
        throw UsageError("label " + std::to_string(labels[i]) + " outside series bounds [1, " +
                         std::to_string(series_length) + "]");
      }
      if (i > 0 && labels[i] <= labels[i - 1]) throw UsageError("labels must be strictly increasing");
    }
  }
};

struct EvalResult {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

inline EvalResult score_counts(std::size_t tp, std::size_t fp, std::size_t fn) {
  EvalResult r{tp, fp, fn};
  r.precision = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
  r.recall = tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
  r.f1 = r.precision + r.recall == 0.0 ? 0.0 : 2.0 * r.recall * r.precision / (r.recall + r.precision);
  return r;
}

// Runs of consecutive indices collapse to their first index.
inline std::vector<std::size_t> condense(const std::vector<std::size_t>& detections) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < detections.size(); ++i) {
    if (i == 0 || detections[i] != detections[i - 1] + 1) out.push_back(detections[i]);
  }
  return out;
}

// A detection d matches the earliest unmatched label t with
// t <= d <= t + delay_budget / sample_period. Early detections never match.
inline EvalResult match_and_score(const std::vector<std::size_t>& detections, const std::vector<std::size_t>& labels,
                                  Duration sample_period = std::chrono::minutes{1},
                                  Duration delay_budget = std::chrono::minutes{10}) {
  if (sample_period.count() <= 0) throw UsageError("match_and_score: sample period must be positive");
  const auto budget = static_cast<std::size_t>(delay_budget / sample_period);
  std::vector<bool> matched(labels.size(), false);
  std::size_t tp = 0;
  std::size_t first_open = 0;  // labels before this index are matched or expired
  for (const std::size_t d : detections) {
    while (first_open < labels.size() && (matched[first_open] || labels[first_open] + budget < d)) ++first_open;
    bool hit = false;
    for (std::size_t li = first_open; li < labels.size() && labels[li] <= d; ++li) {
      if (!matched[li] && d <= labels[li] + budget) {
        matched[li] = true;
        hit = true;
        break;
      }
    }
    if (hit) ++tp;
  }
  return score_counts(tp, detections.size() - tp, labels.size() - tp);
}

inline nlohmann::json labels_to_json(const LabelSet& l) { return {{"series_id", l.series_id}, {"labels", l.labels}}; }

inline LabelSet labels_from_json(const nlohmann::json& j) {
  try {
    LabelSet l;
    l.series_id = j.value("series_id", std::string{});
    l.labels = j.at("labels").get<std::vector<std::size_t>>();
    for (std::size_t i = 1; i < l.labels.size(); ++i) {
      if (l.labels[i] <= l.labels[i - 1]) throw ParseError("labels: indices must be strictly increasing");
    }
    if (!l.labels.empty() && l.labels.front() == 0) throw ParseError("labels: indices are 1-based");
    return l;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("labels: ") + e.what());
  }
}

struct MetricsRow {
  std::string name;
  std::size_t batches = 0;
  EvalResult result;
  double running_time_s = 0.0;
};

// Per-series rows followed by two averages: over series and over batches.
inline std::string format_metrics_table(const std::vector<MetricsRow>& series_rows,
                                        const std::vector<MetricsRow>& batch_rows) {
  std::ostringstream os;
  os << "series,batches,precision,recall,f1,tp,fp,fn,running_time_s\n";
  auto line = [&](const std::string& name, std::size_t batches, double p, double r, double f, std::size_t tp,
                  std::size_t fp, std::size_t fn, double t) {
    os << name << ',' << batches << ',' << format_number(p) << ',' << format_number(r) << ',' << format_number(f)
       << ',' << tp << ',' << fp << ',' << fn << ',' << format_number(t) << '\n';
  };
  auto mean_line = [&](const std::string& name, const std::vector<MetricsRow>& rows) {
    if (rows.empty()) return;
    double p = 0, r = 0, f = 0, t = 0;
    std::size_t tp = 0, fp = 0, fn = 0, b = 0;
    for (const auto& row : rows) {
      p += row.result.precision;
      r += row.result.recall;
      f += row.result.f1;
      t += row.running_time_s;
      tp += row.result.tp;
      fp += row.result.fp;
      fn += row.result.fn;
      b += row.batches;
    }
    const auto n = static_cast<double>(rows.size());
    line(name, b, p / n, r / n, f / n, tp, fp, fn, t / n);
  };
  for (const auto& row : series_rows) {
    line(row.name, row.batches, row.result.precision, row.result.recall, row.result.f1, row.result.tp, row.result.fp,
         row.result.fn, row.running_time_s);
  }
  mean_line("mean_over_series", series_rows);
  mean_line("mean_over_batches", batch_rows);
  return os.str();
}

// -------------------------------------------------------------- synthetic --

// Portable generator: std::mt19937_64 (output fully specified by the C++
// standard) feeding a 53-bit uniform and the Marsaglia polar method.
class PortableRng {
 public:
  explicit PortableRng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [lo, hi].
  std::size_t uniform_index(std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>(uniform() * static_cast<double>(hi - lo + 1));
  }

  double normal() {
    if (cached_) {
      cached_ = false;
      return spare_;
    }
    double u = 0, v = 0, s = 0;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    cached_ = true;
    return u * f;
  }

 private:
  std::mt19937_64 engine_;
  bool cached_ = false;
  double spare_ = 0.0;
};

struct Harmonic {
  double period_samples = 1440;
  double amplitude = 0.0;
  double phase = 0.0;  // radians
};

struct SpikePlan {
  std::size_t index = 0;  // 1-based
  double magnitude = 0.0;
};

struct LevelShiftPlan {
  std::size_t start = 0;  // 1-based
  std::size_t duration = 1;
  double magnitude = 0.0;
};

// From `transition_index` onward the seasonal profile is evaluated
// `offset_samples` earlier, so post-transition seasons no longer line up
// with pre-transition ones.
struct DstShiftPlan {
  std::size_t transition_index = 0;
  long long offset_samples = 60;
};

struct HolidayPlan {
  std::size_t start = 0;
  std::size_t end = 0;
  double magnitude = 0.0;  // subtracted over [start, end]
  std::string label = "holiday";
};

struct SyntheticSpec {
  std::string series_id = "synthetic";
  std::size_t weeks = 4;
  std::size_t season_len = 10080;
  Instant start_time = parse_rfc3339("2024-01-01T00:00:00Z");
  Duration sample_period = std::chrono::minutes{1};
  double baseline = 100.0;
  std::vector<Harmonic> profile;
  double trend_slope = 0.0;  // per sample
  double noise_std = 1.0;
  std::vector<SpikePlan> spikes;
  std::vector<LevelShiftPlan> level_shifts;
  std::optional<DstShiftPlan> dst_shift;
  std::optional<HolidayPlan> holiday;
  std::vector<std::size_t> missing;  // 1-based indices set to MISSING
  std::uint64_t seed = 0;

  std::size_t length() const { return weeks * season_len; }
};

struct SyntheticSeries {
  TimeSeries series;
  LabelSet labels;
  CalendarConfig calendar;
};

inline double profile_value(const std::vector<Harmonic>& profile, double t) {
  double v = 0.0;
  for (const auto& h : profile) v += h.amplitude * std::sin(2.0 * std::numbers::pi * t / h.period_samples + h.phase);
  return v;
}

inline SyntheticSeries generate_synthetic(const SyntheticSpec& spec) {
  if (spec.weeks < 2) throw UsageError("generate_synthetic: at least 2 seasons are required");
  if (spec.noise_std < 0.0) throw UsageError("generate_synthetic: noise_std must be non-negative");
  const std::size_t n = spec.length();
  auto check = [&](std::size_t idx, const std::string& what) {
    if (idx < 1 || idx > n) {
      throw UsageError("generate_synthetic: " + what + " at index " + std::to_string(idx) + " outside series [1, " +
                       std::to_string(n) + "]");
    }
  };
  for (const auto& s : spec.spikes) check(s.index, "spike");
  for (const auto& l : spec.level_shifts) {
    if (l.duration < 1) throw UsageError("generate_synthetic: level shift duration must be at least 1");
    check(l.start, "level shift start");
    check(l.start + l.duration - 1, "level shift end");
  }
  if (spec.dst_shift) check(spec.dst_shift->transition_index, "DST transition");
  if (spec.holiday) {
    check(spec.holiday->start, "holiday start");
    check(spec.holiday->end, "holiday end");
    if (spec.holiday->end < spec.holiday->start) throw UsageError("generate_synthetic: holiday ends before it starts");
  }
  for (const auto m : spec.missing) check(m, "missing value");

  PortableRng rng(spec.seed);
  std::vector<double> y(n);
  for (std::size_t k = 1; k <= n; ++k) {
    // Phase within the season, so the profile repeats exactly.
    auto phase = static_cast<long long>(k - 1);
    if (spec.dst_shift && k >= spec.dst_shift->transition_index) phase -= spec.dst_shift->offset_samples;
    const auto season = static_cast<long long>(spec.season_len);
    const auto t = static_cast<double>(((phase % season) + season) % season);
    const double noise = spec.noise_std > 0.0 ? spec.noise_std * rng.normal() : 0.0;
    y[k - 1] = spec.baseline + spec.trend_slope * static_cast<double>(k - 1) + profile_value(spec.profile, t) + noise;
  }
  for (const auto& s : spec.spikes) y[s.index - 1] += s.magnitude;
  for (const auto& l : spec.level_shifts) {
    for (std::size_t k = l.start; k < l.start + l.duration; ++k) y[k - 1] += l.magnitude;
  }

  if (spec.holiday) {
    for (std::size_t k = spec.holiday->start; k <= spec.holiday->end; ++k) y[k - 1] -= spec.holiday->magnitude;
  }
  for (const auto m : spec.missing) y[m - 1] = kMissing;

  TimeSeries series(spec.start_time, std::move(y), spec.sample_period);
  LabelSet labels{spec.series_id, {}};
  for (const auto& s : spec.spikes) labels.labels.push_back(s.index);
  for (const auto& l : spec.level_shifts) labels.labels.push_back(l.start);
  std::sort(labels.labels.begin(), labels.labels.end());
  labels.labels.erase(std::unique(labels.labels.begin(), labels.labels.end()), labels.labels.end());

  CalendarConfig calendar;
  if (spec.dst_shift) calendar.dst_transitions.push_back(series.time_at(spec.dst_shift->transition_index));
  if (spec.holiday) {
    calendar.holidays.push_back(
        {series.time_at(spec.holiday->start), series.time_at(spec.holiday->end), spec.holiday->label});
  }
  return {std::move(series), std::move(labels), std::move(calendar)};
}

// Default profile for 1-minute data with weekly seasonality: a weekly wave
// plus a stronger daily cycle.
inline std::vector<Harmonic> default_profile(double weekly_amplitude, double daily_amplitude) {
  return {{10080.0, weekly_amplitude, 0.0}, {1440.0, daily_amplitude, 0.3}};
}

struct AnomalyPlanOptions {
  std::size_t spikes = 6;
  std::size_t level_shifts = 4;
  double magnitude = 8.0;  // absolute
  std::size_t min_shift_duration = 30;
  std::size_t max_shift_duration = 180;
  std::size_t first_index = 1;  // earliest allowed event start
  std::size_t min_gap = 300;    // samples between events
};

// Draws event positions (and signs) from `rng`, keeping events at least
// min_gap apart and entirely inside [first_index, length].
inline void plan_random_anomalies(SyntheticSpec& spec, PortableRng& rng, const AnomalyPlanOptions& opt) {
  const std::size_t n = spec.length();
  if (opt.first_index < 1 || opt.first_index + opt.max_shift_duration >= n) {
    throw UsageError("plan_random_anomalies: placement range is empty");
  }
  std::vector<std::pair<std::size_t, std::size_t>> taken;  // [start, end]
  auto free_at = [&](std::size_t s, std::size_t e) {
    for (const auto& [a, b] : taken) {
      if (s <= b + opt.min_gap && a <= e + opt.min_gap) return false;
    }
    return true;
  };
  auto place = [&](std::size_t duration) {
    for (int attempt = 0; attempt < 100000; ++attempt) {
      const std::size_t s = rng.uniform_index(opt.first_index, n - duration);
      if (free_at(s, s + duration - 1)) {
        taken.emplace_back(s, s + duration - 1);
        return s;
      }
    }
    throw UsageError("plan_random_anomalies: could not place all events; reduce counts or min_gap");
  };
  auto signed_magnitude = [&]() { return rng.uniform() < 0.5 ? -opt.magnitude : opt.magnitude; };
  for (std::size_t i = 0; i < opt.spikes; ++i) {
    const std::size_t s = place(1);
    spec.spikes.push_back({s, signed_magnitude()});
  }
  for (std::size_t i = 0; i < opt.level_shifts; ++i) {
    const std::size_t d = rng.uniform_index(opt.min_shift_duration, opt.max_shift_duration);
    const std::size_t s = place(d);
    spec.level_shifts.push_back({s, d, signed_magnitude()});
  }
}

inline nlohmann::json synthetic_manifest(const SyntheticSpec& spec) {
  nlohmann::json j;
  j["series_id"] = spec.series_id;
  j["seed"] = spec.seed;
  j["weeks"] = spec.weeks;
  j["season_len"] = spec.season_len;
  j["start_time"] = format_rfc3339(spec.start_time);
  j["sample_period_seconds"] = spec.sample_period.count();
  j["baseline"] = spec.baseline;
  j["trend_slope"] = spec.trend_slope;
  j["noise_std"] = spec.noise_std;
  j["profile"] = nlohmann::json::array();
  for (const auto& h : spec.profile) {
    j["profile"].push_back({{"period_samples", h.period_samples}, {"amplitude", h.amplitude}, {"phase", h.phase}});
  }
  j["spikes"] = nlohmann::json::array();
  for (const auto& s : spec.spikes) j["spikes"].push_back({{"index", s.index}, {"magnitude", s.magnitude}});
  j["level_shifts"] = nlohmann::json::array();
  for (const auto& l : spec.level_shifts) {
    j["level_shifts"].push_back({{"start", l.start}, {"duration", l.duration}, {"magnitude", l.magnitude}});
  }
  if (spec.dst_shift) {
    j["dst_shift"] = {{"transition_index", spec.dst_shift->transition_index},
                      {"offset_samples", spec.dst_shift->offset_samples}};
  }
  if (spec.holiday) {
    j["holiday"] = {{"start", spec.holiday->start},
                    {"end", spec.holiday->end},
                    {"magnitude", spec.holiday->magnitude},
                    {"label", spec.holiday->label}};
  }
  j["missing"] = spec.missing;
  return j;
}

}  // namespace mediff
