#pragma once

#include <chrono>
#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mediff/calendar.hpp"
#include "mediff/config.hpp"
#include "mediff/core_model.hpp"
#include "mediff/decompose.hpp"
#include "mediff/errors.hpp"
#include "mediff/esd.hpp"

namespace mediff {

inline constexpr int kReportSchemaVersion = 1;

struct Anomaly {
  std::size_t index = 0;  // 1-based position in the batch series
  Instant timestamp;
  double observed = 0.0;
  double residual = 0.0;
  double zscore = 0.0;
  double critical = 0.0;

  friend bool operator==(const Anomaly&, const Anomaly&) = default;
};

struct AnomalyReport {
  std::string series_id;
  TimeSpan batch_span;
  std::vector<Anomaly> anomalies;
  EffectResolution effect;
  DetectorConfig config_used;
  std::size_t residual_first_index = 0;  // first batch index the residual (and ESD) covers
  std::size_t residual_size = 0;
  std::size_t max_outliers_used = 0;
  double timing_seconds = 0.0;
};

inline DecompositionParams decomposition_params(const DetectorConfig& config, const EffectResolution& effect) {
  return {config.trend_window(), config.season_len, config.w_s, config.w_s_hat, config.w_r, effect.beta, effect.gamma};
}

// Shortest batch for which every stage has enough data, assuming no MISSING
// residual values.
inline std::size_t minimum_batch_length(const DetectorConfig& config, int gamma) {
  const std::size_t m = config.max_outliers.value_or(1);
  return config.trend_window() - 1 + (gamma == 1 ? config.w_r - 1 : 0) + m + 3;
}

// Runs decomposition and the ESD test with already-resolved effects.
inline AnomalyReport detect_with_effects(const TimeSeries& y, const DetectorConfig& config,
                                         const EffectResolution& effect, std::string series_id = {}) {
  const auto started = std::chrono::steady_clock::now();
  config.validate();
  if (!(effect.beta >= 0.0 && effect.beta <= 1.0) || (effect.gamma != 0 && effect.gamma != 1)) {
    throw UsageError("detect: resolved effects out of range");
  }
  const auto values = y.values();
  if (std::all_of(values.begin(), values.end(), [](double v) { return is_missing(v); })) {
    throw UsageError("detect: batch contains only MISSING values");
  }

  const std::size_t required = minimum_batch_length(config, effect.gamma);
  if (y.length() < required) {
    throw InsufficientDataError("detect: series has " + std::to_string(y.length()) + " samples, at least " +
                                    std::to_string(required) + " required (w_mu=" +
                                    std::to_string(config.trend_window()) +
                                    (effect.gamma == 1 ? ", w_r=" + std::to_string(config.w_r) : std::string{}) + ")",
                                required);
  }

  const DecompositionResult parts = decompose(y, decomposition_params(config, effect));
  const auto residual = parts.residual.values();
  const auto present = static_cast<std::size_t>(
      std::count_if(residual.begin(), residual.end(), [](double v) { return !is_missing(v); }));
  if (present < 4) {
    throw InsufficientDataError("detect: residual has " + std::to_string(present) +
                                    " present values, at least 4 required",
                                required + (4 - present));
  }
  const std::size_t m = config.resolve_max_outliers(present);
  const EsdOutcome esd = esd_test(residual, m, config.alpha, config.zscore_mode, config.mad_scale);

  AnomalyReport report;
  report.series_id = std::move(series_id);
  report.batch_span = {y.start_time(), y.end_time()};
  report.effect = effect;
  report.config_used = config;
  report.residual_first_index = parts.residual.first();
  report.residual_size = present;
  report.max_outliers_used = m;
  for (std::size_t i = 0; i < esd.num_outliers; ++i) {
    const EsdIteration& it = esd.iterations[i];
    const std::size_t k = parts.residual.first() + it.removed_index - 1;
    report.anomalies.push_back({k, y.time_at(k), y.value(k), it.removed_value, it.zscore, it.critical});
  }
  std::sort(report.anomalies.begin(), report.anomalies.end(),
            [](const Anomaly& a, const Anomaly& b) { return a.index < b.index; });
  report.timing_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

inline EffectResolution resolve_batch_effects(const TimeSeries& y, const DetectorConfig& config,
                                              const CalendarConfig& calendar) {
  return resolve_effects({y.start_time(), y.end_time()}, calendar, config.beta, config.gamma,
                         y.sample_period() * static_cast<long long>(config.season_len));
}

inline AnomalyReport detect_batch(const TimeSeries& y, const DetectorConfig& config, const CalendarConfig& calendar,
                                  std::string series_id = {}) {
  return detect_with_effects(y, config, resolve_batch_effects(y, config, calendar), std::move(series_id));
}

// Independent detection per window, in window order. Indices in the
// returned reports count from the first window's start, so windows cut from
// one series report positions in that series. An anomaly whose timestamp was
// already reported by an earlier window is dropped.
inline std::vector<AnomalyReport> detect_stream(std::span<const TimeSeries> batches, const DetectorConfig& config,
                                                const CalendarConfig& calendar, const std::string& series_id = {}) {
  std::vector<AnomalyReport> reports;
  if (batches.empty()) return reports;
  const Duration period = batches.front().sample_period();
  for (const auto& b : batches) {
    if (b.sample_period() != period) throw UsageError("detect_stream: windows have inconsistent sample periods");
  }
  const Instant origin = batches.front().start_time();
  std::set<Instant> seen;
  for (const auto& b : batches) {
    if (b.start_time() < origin) throw UsageError("detect_stream: windows must not start before the first window");
    AnomalyReport r = detect_batch(b, config, calendar, series_id);
    const auto shift = static_cast<std::size_t>((b.start_time() - origin) / period);
    r.residual_first_index += shift;
    for (auto& a : r.anomalies) a.index += shift;
    std::erase_if(r.anomalies, [&](const Anomaly& a) { return !seen.insert(a.timestamp).second; });
    reports.push_back(std::move(r));
  }
  return reports;
}

// Sliding windows of `batch_len` samples every `stride` samples. The last
// window is aligned to the series end so the tail is always covered; a
// series shorter than one batch yields a single window.
inline std::vector<TimeSeries> split_windows(const TimeSeries& y, std::size_t batch_len, std::size_t stride) {
  if (batch_len == 0 || stride == 0) throw UsageError("split_windows: batch length and stride must be positive");
  std::vector<TimeSeries> out;
  const auto values = y.values();
  auto window = [&](std::size_t offset, std::size_t len) {
    out.emplace_back(y.time_at(offset + 1), std::vector<double>(values.begin() + static_cast<std::ptrdiff_t>(offset),
                                                                values.begin() + static_cast<std::ptrdiff_t>(offset + len)),
                     y.sample_period());
  };
  if (y.length() <= batch_len) {
    window(0, y.length());
    return out;
  }
  std::size_t offset = 0;
  for (; offset + batch_len <= y.length(); offset += stride) window(offset, batch_len);
  if (offset - stride + batch_len < y.length()) window(y.length() - batch_len, batch_len);
  return out;
}

inline nlohmann::json report_to_json(const AnomalyReport& r) {
  nlohmann::json j;
  j["schema_version"] = kReportSchemaVersion;
  j["series_id"] = r.series_id;
  j["batch_span"] = {{"start", format_rfc3339(r.batch_span.start)}, {"end", format_rfc3339(r.batch_span.end)}};
  j["anomalies"] = nlohmann::json::array();
  for (const auto& a : r.anomalies) {
    j["anomalies"].push_back({{"index", a.index},
                              {"timestamp", format_rfc3339(a.timestamp)},
                              {"observed", a.observed},
                              {"residual", a.residual},
                              {"zscore", a.zscore},
                              {"critical", a.critical}});
  }
  j["effect"] = {{"beta", r.effect.beta}, {"gamma", r.effect.gamma}, {"reasons", r.effect.reasons}};
  j["config_used"] = config_to_json(r.config_used);
  j["residual_first_index"] = r.residual_first_index;
  j["residual_size"] = r.residual_size;
  j["max_outliers_used"] = r.max_outliers_used;
  j["timing_seconds"] = r.timing_seconds;
  return j;
}

inline AnomalyReport report_from_json(const nlohmann::json& j) {
  try {
    if (j.at("schema_version").get<int>() != kReportSchemaVersion) {
      throw ParseError("report: unsupported schema_version " + j.at("schema_version").dump());
    }
    AnomalyReport r;
    r.series_id = j.at("series_id").get<std::string>();
    r.batch_span = {parse_rfc3339(j.at("batch_span").at("start").get<std::string>()),
                    parse_rfc3339(j.at("batch_span").at("end").get<std::string>())};
    for (const auto& a : j.at("anomalies")) {
      r.anomalies.push_back({a.at("index").get<std::size_t>(), parse_rfc3339(a.at("timestamp").get<std::string>()),
                             a.at("observed").get<double>(), a.at("residual").get<double>(),
                             a.at("zscore").get<double>(), a.at("critical").get<double>()});
    }
    r.effect.beta = j.at("effect").at("beta").get<double>();
    r.effect.gamma = j.at("effect").at("gamma").get<int>();
    r.effect.reasons = j.at("effect").at("reasons").get<std::vector<std::string>>();
    r.config_used = config_from_json(j.at("config_used"));
    r.residual_first_index = j.at("residual_first_index").get<std::size_t>();
    r.residual_size = j.at("residual_size").get<std::size_t>();
    r.max_outliers_used = j.at("max_outliers_used").get<std::size_t>();
    r.timing_seconds = j.at("timing_seconds").get<double>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("report: ") + e.what());
  }
}

// {"schema_version": 1, "reports": [ ... one object per batch ... ]}
inline nlohmann::json reports_document(std::span<const AnomalyReport> reports) {
  nlohmann::json doc;
  doc["schema_version"] = kReportSchemaVersion;
  doc["reports"] = nlohmann::json::array();
  for (const auto& r : reports) doc["reports"].push_back(report_to_json(r));
  return doc;
}

}  // namespace mediff
