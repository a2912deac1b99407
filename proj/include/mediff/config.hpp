#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "mediff/errors.hpp"

namespace mediff {

enum class ZScoreMode { kRobustMad, kClassic };

// Scale applied to the raw median absolute deviation in robust mode.
enum class MadScale {
  kNormal,  // MAD * 1.4826, consistent with the standard deviation under Gaussian noise
  kRaw,     // MAD as-is
};

inline constexpr double kMadNormalConsistency = 1.482602218505602;  // 1 / Phi^-1(3/4)

inline std::string_view to_string(ZScoreMode m) { return m == ZScoreMode::kClassic ? "classic" : "robust_mad"; }
inline std::string_view to_string(MadScale s) { return s == MadScale::kRaw ? "raw" : "normal"; }

inline ZScoreMode parse_zscore_mode(std::string_view s) {
  if (s == "robust_mad" || s == "ROBUST_MAD" || s == "robust") return ZScoreMode::kRobustMad;
  if (s == "classic" || s == "CLASSIC") return ZScoreMode::kClassic;
  throw UsageError("unknown zscore mode '" + std::string(s) + "' (expected robust_mad or classic)");
}

inline MadScale parse_mad_scale(std::string_view s) {
  if (s == "normal") return MadScale::kNormal;
  if (s == "raw") return MadScale::kRaw;
  throw UsageError("unknown MAD scale '" + std::string(s) + "' (expected normal or raw)");
}

// Window lengths are in samples. Defaults target 1-minute data with weekly
// seasonality processed in 4-week batches.
struct DetectorConfig {
  std::optional<std::size_t> w_mu;  // trend window; unset means one season
  std::size_t season_len = 10080;
  std::size_t w_s = 3;
  std::size_t w_s_hat = 30;
  std::size_t w_r = 60;
  double beta = 0.4;  // used only while a DST transition affects the batch
  int gamma = 1;      // requested; takes effect only while a holiday overlaps the batch
  std::optional<std::size_t> max_outliers;  // unset means "auto"
  double anomaly_rate = 0.02;
  double alpha = 0.05;
  ZScoreMode zscore_mode = ZScoreMode::kRobustMad;
  MadScale mad_scale = MadScale::kNormal;
  std::size_t batch_len = 40320;
  std::size_t stride = 10080;

  std::size_t trend_window() const noexcept { return w_mu.value_or(season_len); }

  // m = round(rate * n) clamped to [1, n - 3] unless fixed explicitly.
  std::size_t resolve_max_outliers(std::size_t n) const {
    if (max_outliers) return *max_outliers;
    const auto rounded = static_cast<std::size_t>(std::llround(anomaly_rate * static_cast<double>(n)));
    const std::size_t upper = n > 3 ? n - 3 : 1;
    return std::clamp<std::size_t>(rounded, 1, upper);
  }

  void validate() const {
    if (season_len < 1) throw UsageError("season_len must be at least 1");
    if (trend_window() < 1) throw UsageError("w_mu must be at least 1");
    if (w_s >= season_len) throw UsageError("w_s must be smaller than season_len");
    if (w_s_hat < 1) throw UsageError("w_s_hat must be at least 1");
    if (w_r < 1) throw UsageError("w_r must be at least 1");
    if (!(beta >= 0.0 && beta <= 1.0)) throw UsageError("beta must lie in [0, 1]");
    if (gamma != 0 && gamma != 1) throw UsageError("gamma must be 0 or 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw UsageError("alpha must lie in (0, 1)");
    if (max_outliers && *max_outliers < 1) throw UsageError("max_outliers must be at least 1");
    if (!(anomaly_rate > 0.0 && anomaly_rate < 1.0)) throw UsageError("anomaly_rate must lie in (0, 1)");
    if (batch_len < 1 || stride < 1) throw UsageError("batch_len and stride must be at least 1");
  }

  friend bool operator==(const DetectorConfig&, const DetectorConfig&) = default;
};

inline nlohmann::json config_to_json(const DetectorConfig& c) {
  nlohmann::json j;
  j["w_mu"] = c.trend_window();
  j["season_len"] = c.season_len;
  j["w_s"] = c.w_s;
  j["w_s_hat"] = c.w_s_hat;
  j["w_r"] = c.w_r;
  j["beta"] = c.beta;
  j["gamma"] = c.gamma;
  if (c.max_outliers) {
    j["max_outliers"] = *c.max_outliers;
  } else {
    j["max_outliers"] = "auto";
  }
  j["anomaly_rate"] = c.anomaly_rate;
  j["alpha"] = c.alpha;
  j["zscore_mode"] = to_string(c.zscore_mode);
  j["mad_scale"] = to_string(c.mad_scale);
  j["batch_len"] = c.batch_len;
  j["stride"] = c.stride;
  return j;
}

namespace detail {

inline std::size_t parse_count(std::string_view key, std::string_view text) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(std::string(text), &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != text.size() || text.empty() || v < 0) {
    throw UsageError("override '" + std::string(key) + "' expects a non-negative integer, got '" + std::string(text) + "'");
  }
  return static_cast<std::size_t>(v);
}

inline double parse_real(std::string_view key, std::string_view text) {
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(std::string(text), &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != text.size() || text.empty() || !std::isfinite(v)) {
    throw UsageError("override '" + std::string(key) + "' expects a real number, got '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace detail

// Applies one textual key=value override. Unknown keys are usage errors.
inline void apply_override(DetectorConfig& c, std::string_view key, std::string_view value) {
  using detail::parse_count;
  using detail::parse_real;
  if (key == "w_mu") {
    c.w_mu = parse_count(key, value);
  } else if (key == "season_len") {
    c.season_len = parse_count(key, value);
  } else if (key == "w_s") {
    c.w_s = parse_count(key, value);
  } else if (key == "w_s_hat") {
    c.w_s_hat = parse_count(key, value);
  } else if (key == "w_r") {
    c.w_r = parse_count(key, value);
  } else if (key == "beta") {
    c.beta = parse_real(key, value);
  } else if (key == "gamma") {
    c.gamma = static_cast<int>(parse_count(key, value));
  } else if (key == "max_outliers") {
    if (value == "auto") {
      c.max_outliers.reset();
    } else {
      c.max_outliers = parse_count(key, value);
    }
  } else if (key == "anomaly_rate") {
    c.anomaly_rate = parse_real(key, value);
  } else if (key == "alpha") {
    c.alpha = parse_real(key, value);
  } else if (key == "zscore_mode") {
    c.zscore_mode = parse_zscore_mode(value);
  } else if (key == "mad_scale") {
    c.mad_scale = parse_mad_scale(value);
  } else if (key == "batch_len") {
    c.batch_len = parse_count(key, value);
  } else if (key == "stride") {
    c.stride = parse_count(key, value);
  } else {
    throw UsageError("unknown configuration key '" + std::string(key) + "'");
  }
}

// Merges a JSON config document over `base`. Values may be numbers or strings.
inline DetectorConfig config_from_json(const nlohmann::json& j, DetectorConfig base = {}) {
  if (!j.is_object()) throw ParseError("config: top-level value must be an object");
  for (const auto& [key, value] : j.items()) {
    if (value.is_string()) {
      apply_override(base, key, value.get<std::string>());
    } else if (value.is_number_integer() || value.is_number_unsigned()) {
      apply_override(base, key, std::to_string(value.get<long long>()));
    } else if (value.is_number_float()) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g", value.get<double>());
      apply_override(base, key, buf);
    } else {
      throw ParseError("config: key '" + key + "' has an unsupported value type");
    }
  }
  return base;
}

}  // namespace mediff
