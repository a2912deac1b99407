#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "mediff/core_model.hpp"
#include "mediff/errors.hpp"
#include "mediff/format.hpp"
#include "mediff/median.hpp"

namespace mediff {

// Robust additive decomposition
//
//   y = trend + dst_seasonal + gamma * event + residual
//
// built entirely from medians. Every component is a Component whose indices
// are 1-based positions of the input series. The trend drops the first
// w_mu - 1 samples; the event component (gamma = 1 only) drops a further
// w_r - 1.

struct DecompositionParams {
  std::size_t w_mu = 10080;
  std::size_t season_len = 10080;
  std::size_t w_s = 3;
  std::size_t w_s_hat = 30;
  std::size_t w_r = 60;
  double beta = 1.0;
  int gamma = 0;
};

struct DecompositionResult {
  Component trend;
  Component detrended;
  Component seasonal;
  Component seasonal_trend;
  Component dst_seasonal;
  Component intermediate;  // y - trend - dst_seasonal
  Component event;         // empty when gamma = 0
  Component residual;
  double beta = 1.0;
  int gamma = 0;
};

namespace detail {

inline void require_same_domain(const Component& a, const Component& b, const char* what) {
  if (a.first() != b.first() || a.size() != b.size()) {
    throw UsageError(std::string(what) + ": component domains are misaligned");
  }
}

inline double subtract(double a, double b) { return (is_missing(a) || is_missing(b)) ? kMissing : a - b; }

}  // namespace detail

inline Component extract_trend(const TimeSeries& y, std::size_t w_mu) {
  if (w_mu == 0) throw UsageError("trend window must be at least 1");
  if (w_mu > y.length()) {
    throw InsufficientDataError("trend window w_mu=" + std::to_string(w_mu) + " needs at least " +
                                    std::to_string(w_mu) + " samples, series has " + std::to_string(y.length()),
                                w_mu);
  }
  return Component(w_mu, moving_median(y.values(), w_mu, EdgePolicy::kTruncate));
}

inline Component detrend(const TimeSeries& y, const Component& trend) {
  if (trend.empty() || trend.last() != y.length()) {
    throw UsageError("detrend: trend must cover the series tail up to index " + std::to_string(y.length()));
  }
  std::vector<double> out(trend.size());
  for (std::size_t k = trend.first(); k <= trend.last(); ++k) {
    out[k - trend.first()] = detail::subtract(y.value(k), trend.at(k));
  }
  return Component(trend.first(), std::move(out));
}

// s[k] = median of detrended[k + i * season_len + j] over every integer i and
// j in [-w_s, w_s] whose index stays inside the domain. The collected
// multiset only depends on k modulo season_len, so one season is computed
// and repeated.
inline Component extract_seasonal(const Component& detrended, std::size_t season_len, std::size_t w_s) {
  if (detrended.empty()) throw UsageError("extract_seasonal: empty detrended series");
  if (season_len == 0) throw UsageError("extract_seasonal: season length must be at least 1");
  if (w_s >= season_len) throw UsageError("extract_seasonal: w_s must be smaller than the season length");

  const auto first = static_cast<long long>(detrended.first());
  const auto last = static_cast<long long>(detrended.last());
  const auto period = static_cast<long long>(season_len);
  const auto half = static_cast<long long>(w_s);
  const auto vals = detrended.values();

  std::vector<double> out(detrended.size());
  std::vector<double> gathered;
  const std::size_t phases = std::min(detrended.size(), season_len);
  for (std::size_t p = 0; p < phases; ++p) {
    const long long k = first + static_cast<long long>(p);
    gathered.clear();
    for (long long j = -half; j <= half; ++j) {
      // smallest in-domain index congruent to k + j
      const long long base = k + j;
      long long start = first + (((base - first) % period) + period) % period;
      for (long long idx = start; idx <= last; idx += period) {
        const double v = vals[static_cast<std::size_t>(idx - first)];
        if (!is_missing(v)) gathered.push_back(v);
      }
    }
    out[p] = gathered.empty() ? kMissing : median_inplace(gathered);
  }
  for (std::size_t p = phases; p < out.size(); ++p) out[p] = out[p - season_len];
  return Component(detrended.first(), std::move(out));
}

// Backward moving median of the detrended series; near the left edge the
// window shrinks to the available prefix.
inline Component extract_seasonal_trend(const Component& detrended, std::size_t w_s_hat) {
  if (w_s_hat == 0) throw UsageError("extract_seasonal_trend: window must be at least 1");
  if (detrended.empty()) throw UsageError("extract_seasonal_trend: empty detrended series");
  return Component(detrended.first(), moving_median(detrended.values(), w_s_hat, EdgePolicy::kPrefix));
}

inline Component blend_dst_seasonal(const Component& seasonal, const Component& seasonal_trend, double beta) {
  if (!(beta >= 0.0 && beta <= 1.0)) throw UsageError("blend_dst_seasonal: beta must lie in [0, 1]");
  detail::require_same_domain(seasonal, seasonal_trend, "blend_dst_seasonal");
  if (beta == 1.0) return seasonal;
  if (beta == 0.0) return seasonal_trend;
  std::vector<double> out(seasonal.size());
  const auto s = seasonal.values();
  const auto sh = seasonal_trend.values();
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = (is_missing(s[i]) || is_missing(sh[i])) ? kMissing : beta * s[i] + (1.0 - beta) * sh[i];
  }
  return Component(seasonal.first(), std::move(out));
}

// r[k] = y[k] - trend[k] - dst_seasonal[k]
inline Component remove_components(const TimeSeries& y, const Component& trend, const Component& dst_seasonal) {
  detail::require_same_domain(trend, dst_seasonal, "remove_components");
  if (trend.empty() || trend.last() != y.length()) throw UsageError("remove_components: trend misaligned with series");
  std::vector<double> out(trend.size());
  for (std::size_t k = trend.first(); k <= trend.last(); ++k) {
    out[k - trend.first()] = detail::subtract(detail::subtract(y.value(k), trend.at(k)), dst_seasonal.at(k));
  }
  return Component(trend.first(), std::move(out));
}

struct EventExtraction {
  Component intermediate;
  Component event;
};

inline EventExtraction extract_event(const TimeSeries& y, const Component& trend, const Component& dst_seasonal,
                                     std::size_t w_r) {
  if (w_r == 0) throw UsageError("extract_event: window must be at least 1");
  EventExtraction out{remove_components(y, trend, dst_seasonal), {}};
  if (out.intermediate.size() < w_r) {
    const std::size_t required = trend.first() + w_r - 1;
    throw InsufficientDataError("event window w_r=" + std::to_string(w_r) + " needs at least " +
                                    std::to_string(required) + " samples, series has " + std::to_string(y.length()),
                                required);
  }
  out.event = Component(out.intermediate.first() + w_r - 1,
                        moving_median(out.intermediate.values(), w_r, EdgePolicy::kTruncate));
  return out;
}

inline Component finalize_residual(const Component& intermediate, const Component& event, int gamma) {
  if (gamma == 0) return intermediate;
  if (gamma != 1) throw UsageError("finalize_residual: gamma must be 0 or 1");
  if (event.empty()) throw UsageError("finalize_residual: gamma = 1 requires an event component");
  if (event.first() < intermediate.first() || event.last() != intermediate.last()) {
    throw UsageError("finalize_residual: event component misaligned with intermediate residual");
  }
  std::vector<double> out(event.size());
  for (std::size_t k = event.first(); k <= event.last(); ++k) {
    out[k - event.first()] = detail::subtract(intermediate.at(k), event.at(k));
  }
  return Component(event.first(), std::move(out));
}

// Smallest series length for which decompose() succeeds.
inline std::size_t minimum_decomposition_length(const DecompositionParams& p) {
  return p.w_mu + (p.gamma == 1 ? p.w_r - 1 : 0);
}

inline DecompositionResult decompose(const TimeSeries& y, const DecompositionParams& p) {
  if (p.gamma != 0 && p.gamma != 1) throw UsageError("decompose: gamma must be 0 or 1");
  DecompositionResult r;
  r.beta = p.beta;
  r.gamma = p.gamma;
  r.trend = extract_trend(y, p.w_mu);
  r.detrended = detrend(y, r.trend);
  r.seasonal = extract_seasonal(r.detrended, p.season_len, p.w_s);
  r.seasonal_trend = extract_seasonal_trend(r.detrended, p.w_s_hat);
  r.dst_seasonal = blend_dst_seasonal(r.seasonal, r.seasonal_trend, p.beta);
  if (p.gamma == 1) {
    auto ev = extract_event(y, r.trend, r.dst_seasonal, p.w_r);
    r.intermediate = std::move(ev.intermediate);
    r.event = std::move(ev.event);
  } else {
    r.intermediate = remove_components(y, r.trend, r.dst_seasonal);
  }
  r.residual = finalize_residual(r.intermediate, r.event, p.gamma);
  return r;
}

// Columnar trace: index,timestamp,y,trend,seasonal,seasonal_trend,dst_seasonal,event,residual
// One row per input sample; components are empty outside their domain and
// where MISSING.
inline void write_trace(std::ostream& os, const TimeSeries& y, const DecompositionResult& r) {
  auto cell = [](const Component& c, std::size_t k) { return c.contains(k) ? format_number(c.at(k)) : std::string{}; };
  os << "index,timestamp,y,trend,seasonal,seasonal_trend,dst_seasonal,event,residual\n";
  for (std::size_t k = 1; k <= y.length(); ++k) {
    os << k << ',' << format_rfc3339(y.time_at(k)) << ',' << format_number(y.value(k)) << ',' << cell(r.trend, k)
       << ',' << cell(r.seasonal, k) << ',' << cell(r.seasonal_trend, k) << ',' << cell(r.dst_seasonal, k) << ','
       << cell(r.event, k) << ',' << cell(r.residual, k) << '\n';
  }
}

}  // namespace mediff
