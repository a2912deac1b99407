#pragma once

#include <cstdint>
#include <filesystem>
#include <future>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "mediff/calendar.hpp"
#include "mediff/config.hpp"
#include "mediff/decompose.hpp"
#include "mediff/detector.hpp"
#include "mediff/errors.hpp"
#include "mediff/evalbench.hpp"
#include "mediff/io.hpp"

namespace mediff::cli {

enum class Command { kDetect, kDecompose, kEval, kSynth };

struct SynthOptions {
  std::size_t weeks = 4;
  double noise_std = 1.0;
  double magnitude_sigmas = 8.0;
  std::size_t spikes = 6;
  std::size_t level_shifts = 4;
  double trend_slope = 0.0;
  double weekly_amplitude = 10.0;
  double daily_amplitude = 20.0;
  long long dst_shift = 0;  // samples; 0 disables
  bool holiday = false;
};

struct RunManifest {
  Command command = Command::kDetect;
  std::vector<std::filesystem::path> inputs;
  std::optional<std::filesystem::path> config;
  std::optional<std::filesystem::path> calendar;
  std::filesystem::path output;
  std::vector<std::pair<std::string, std::string>> overrides;  // applied in order
  std::vector<std::filesystem::path> labels;                   // eval, paired with inputs
  std::uint64_t seed = 0;
  SynthOptions synth;
};

// Built-in defaults, then the config file, then overrides.
inline DetectorConfig load_config(const RunManifest& m) {
  DetectorConfig c;
  if (m.config) {
    try {
      c = config_from_json(nlohmann::json::parse(read_text_file(*m.config)), c);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(m.config->string() + ": " + e.what());
    }
  }
  for (const auto& [key, value] : m.overrides) apply_override(c, key, value);
  c.validate();
  return c;
}

inline CalendarConfig load_calendar(const RunManifest& m) {
  if (!m.calendar) return {};
  try {
    return parse_calendar(read_text_file(*m.calendar));
  } catch (const std::exception& e) {
    throw ParseError(m.calendar->string() + ": " + e.what());
  }
}

namespace detail {

inline void require_inputs(const RunManifest& m, std::size_t min_count) {
  if (m.inputs.size() < min_count) throw UsageError("missing --input");
  for (const auto& p : m.inputs) {
    if (!std::filesystem::exists(p)) throw UsageError("input '" + p.string() + "' does not exist");
  }
  if (m.output.empty()) throw UsageError("missing --output");
}

inline void run_detect(const RunManifest& m) {
  require_inputs(m, 1);
  const DetectorConfig config = load_config(m);
  const CalendarConfig calendar = load_calendar(m);

  std::vector<std::future<std::vector<AnomalyReport>>> jobs;
  for (const auto& path : m.inputs) {
    jobs.push_back(std::async(std::launch::async, [&config, &calendar, path]() {
      const TimeSeries series = load_series_csv(path);
      const auto windows = split_windows(series, config.batch_len, config.stride);
      return detect_stream(windows, config, calendar, path.stem().string());
    }));
  }
  std::vector<AnomalyReport> all;
  for (auto& job : jobs) {
    auto reports = job.get();
    for (auto& r : reports) all.push_back(std::move(r));
  }
  write_file_atomic(m.output, reports_document(all).dump(2) + "\n");
}

inline void run_decompose(const RunManifest& m) {
  require_inputs(m, 1);
  if (m.inputs.size() != 1) throw UsageError("decompose takes exactly one --input");
  const DetectorConfig config = load_config(m);
  const CalendarConfig calendar = load_calendar(m);
  const TimeSeries series = load_series_csv(m.inputs.front());
  const EffectResolution effect = resolve_batch_effects(series, config, calendar);
  const DecompositionResult parts = decompose(series, decomposition_params(config, effect));
  std::ostringstream os;
  write_trace(os, series, parts);
  write_file_atomic(m.output, os.str());
}

inline void run_eval(const RunManifest& m) {
  require_inputs(m, 1);
  if (m.labels.size() != m.inputs.size()) throw UsageError("eval needs one --labels file per --input");
  const DetectorConfig config = load_config(m);
  const CalendarConfig calendar = load_calendar(m);

  std::vector<MetricsRow> series_rows;
  std::vector<MetricsRow> batch_rows;
  for (std::size_t f = 0; f < m.inputs.size(); ++f) {
    const TimeSeries series = load_series_csv(m.inputs[f]);
    LabelSet labels;
    try {
      labels = labels_from_json(nlohmann::json::parse(read_text_file(m.labels[f])));
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(m.labels[f].string() + ": " + e.what());
    }
    labels.validate(series.length());
    const std::string name = m.inputs[f].stem().string();
    const auto windows = split_windows(series, config.batch_len, config.stride);

    std::vector<std::size_t> all_detections;
    double total_time = 0.0;
    for (std::size_t b = 0; b < windows.size(); ++b) {
      const AnomalyReport r = detect_batch(windows[b], config, calendar, name);
      const auto offset = static_cast<std::size_t>((windows[b].start_time() - series.start_time()) / series.sample_period());
      std::vector<std::size_t> detections;
      for (const auto& a : r.anomalies) detections.push_back(a.index + offset);
      std::vector<std::size_t> in_batch;
      for (const auto l : labels.labels) {
        if (l >= offset + r.residual_first_index && l <= offset + windows[b].length()) in_batch.push_back(l);
      }
      batch_rows.push_back({name + "#" + std::to_string(b + 1), 1,
                            match_and_score(condense(detections), in_batch, series.sample_period()), r.timing_seconds});
      all_detections.insert(all_detections.end(), detections.begin(), detections.end());
      total_time += r.timing_seconds;
    }
    std::sort(all_detections.begin(), all_detections.end());
    all_detections.erase(std::unique(all_detections.begin(), all_detections.end()), all_detections.end());
    series_rows.push_back({name, windows.size(),
                           match_and_score(condense(all_detections), labels.labels, series.sample_period()),
                           total_time});
  }
  write_file_atomic(m.output, format_metrics_table(series_rows, batch_rows));
}

inline void run_synth(const RunManifest& m) {
  if (m.output.empty()) throw UsageError("missing --output (directory)");
  const SynthOptions& o = m.synth;
  const DetectorConfig config = load_config(m);

  SyntheticSpec spec;
  spec.series_id = "synthetic-" + std::to_string(m.seed);
  spec.seed = m.seed;
  spec.weeks = o.weeks;
  spec.season_len = config.season_len;
  spec.noise_std = o.noise_std;
  spec.trend_slope = o.trend_slope;
  spec.profile = default_profile(o.weekly_amplitude, o.daily_amplitude);
  const std::size_t n = spec.length();
  if (o.dst_shift != 0) spec.dst_shift = DstShiftPlan{n / 2 + 1, o.dst_shift};
  if (o.holiday) spec.holiday = HolidayPlan{n - config.season_len / 2, n - config.season_len / 2 + 720, 5.0 * o.noise_std, "holiday"};

  // Events go where a full detection window can see them.
  PortableRng plan_rng(m.seed ^ 0x9e3779b97f4a7c15ULL);
  AnomalyPlanOptions plan;
  plan.spikes = o.spikes;
  plan.level_shifts = o.level_shifts;
  plan.magnitude = o.magnitude_sigmas * o.noise_std;
  plan.first_index = std::min(n - 1, config.trend_window() + config.w_r);
  plan_random_anomalies(spec, plan_rng, plan);

  const SyntheticSeries s = generate_synthetic(spec);
  std::filesystem::create_directories(m.output);
  std::ostringstream csv;
  write_series_csv(csv, s.series);
  write_file_atomic(m.output / "series.csv", csv.str());
  write_file_atomic(m.output / "labels.json", labels_to_json(s.labels).dump(2) + "\n");
  write_file_atomic(m.output / "calendar.json", serialize_calendar(s.calendar));
  nlohmann::json manifest = synthetic_manifest(spec);
  manifest["files"] = {{"series", "series.csv"}, {"labels", "labels.json"}, {"calendar", "calendar.json"}};
  write_file_atomic(m.output / "manifest.json", manifest.dump(2) + "\n");
}

}  // namespace detail

// Returns the process exit status; diagnostics go to `err` as one line.
inline int run(const RunManifest& m, std::ostream& err) {
  try {
    switch (m.command) {
      case Command::kDetect:
        detail::run_detect(m);
        break;
      case Command::kDecompose:
        detail::run_decompose(m);
        break;
      case Command::kEval:
        detail::run_eval(m);
        break;
      case Command::kSynth:
        detail::run_synth(m);
        break;
    }
  } catch (const InsufficientDataError& e) {
    err << "error: insufficient data: " << e.what() << " (required minimum length " << e.required_minimum() << ")\n";
    return 3;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace mediff::cli
