#pragma once

// Literal per-index transcription of the median decomposition, used as an
// oracle. Every median sorts its window from scratch; the seasonal window is
// collected by looping over season offsets in both directions.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace oracle {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

inline double sorted_median(std::vector<double> v) {
  std::erase_if(v, [](double x) { return std::isnan(x); });
  if (v.empty()) return kNaN;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// All vectors are indexed by 1-based k (element 0 unused); NaN outside domains.
struct Decomposition {
  std::vector<double> trend, detrended, seasonal, seasonal_trend, dst_seasonal, intermediate, event, residual;
};

inline Decomposition decompose(const std::vector<double>& y0, std::size_t w_mu, std::size_t season_len,
                               std::size_t w_s, std::size_t w_s_hat, std::size_t w_r, double beta, int gamma) {
  const std::size_t len = y0.size();
  std::vector<double> y(len + 1, kNaN);
  for (std::size_t k = 1; k <= len; ++k) y[k] = y0[k - 1];
  auto blank = [&] { return std::vector<double>(len + 1, kNaN); };
  auto sub = [](double a, double b) { return (std::isnan(a) || std::isnan(b)) ? kNaN : a - b; };

  Decomposition d{blank(), blank(), blank(), blank(), blank(), blank(), blank(), blank()};
  for (std::size_t k = w_mu; k <= len; ++k) {
    std::vector<double> win;
    for (std::size_t i = 0; i < w_mu; ++i) win.push_back(y[k - i]);
    d.trend[k] = sorted_median(win);
    d.detrended[k] = sub(y[k], d.trend[k]);
  }
  const long long lo = static_cast<long long>(w_mu);
  const long long hi = static_cast<long long>(len);
  const long long ls = static_cast<long long>(season_len);
  const long long seasons = hi / ls + 2;
  for (long long k = lo; k <= hi; ++k) {
    std::vector<double> win;
    for (long long i = -seasons; i <= seasons; ++i) {
      for (long long j = -static_cast<long long>(w_s); j <= static_cast<long long>(w_s); ++j) {
        const long long idx = k + i * ls + j;
        if (idx >= lo && idx <= hi) win.push_back(d.detrended[static_cast<std::size_t>(idx)]);
      }
    }
    d.seasonal[static_cast<std::size_t>(k)] = sorted_median(win);
  }
  for (std::size_t k = w_mu; k <= len; ++k) {
    std::vector<double> win;
    for (std::size_t i = 0; i < w_s_hat && k >= w_mu + i; ++i) win.push_back(d.detrended[k - i]);
    d.seasonal_trend[k] = sorted_median(win);
    if (beta == 1.0) {
      d.dst_seasonal[k] = d.seasonal[k];
    } else if (beta == 0.0) {
      d.dst_seasonal[k] = d.seasonal_trend[k];
    } else {
      d.dst_seasonal[k] = beta * d.seasonal[k] + (1.0 - beta) * d.seasonal_trend[k];
    }
    d.intermediate[k] = sub(sub(y[k], d.trend[k]), d.dst_seasonal[k]);
  }
  if (gamma == 1) {
    for (std::size_t k = w_mu + w_r - 1; k <= len; ++k) {
      std::vector<double> win;
      for (std::size_t i = 0; i < w_r; ++i) win.push_back(d.intermediate[k - i]);
      d.event[k] = sorted_median(win);
      d.residual[k] = sub(d.intermediate[k], d.event[k]);
    }
  } else {
    d.residual = d.intermediate;
  }
  return d;
}

}  // namespace oracle
