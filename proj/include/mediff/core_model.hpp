#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mediff/errors.hpp"
#include "mediff/time.hpp"

namespace mediff {

// MISSING is represented by a quiet NaN; every other stored value is finite.
inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

inline bool is_missing(double v) noexcept { return std::isnan(v); }

// Uniformly sampled metric. Indices exposed by this class are 1-based:
// value(1) is the first sample and time_at(k) = start + (k - 1) * period.
class TimeSeries {
 public:
  TimeSeries(Instant start_time, std::vector<double> values, Duration sample_period = std::chrono::minutes{1})
      : start_time_(start_time), sample_period_(sample_period), values_(std::move(values)) {
    if (values_.empty()) throw UsageError("time series must contain at least one sample");
    if (sample_period_.count() <= 0) throw UsageError("sample period must be positive");
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (std::isinf(values_[i])) {
        throw UsageError("time series value at index " + std::to_string(i + 1) + " is infinite");
      }
    }
  }

  Instant start_time() const noexcept { return start_time_; }
  Duration sample_period() const noexcept { return sample_period_; }
  std::size_t length() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }

  double value(std::size_t k) const { return values_.at(k - 1); }
  Instant time_at(std::size_t k) const {
    return start_time_ + sample_period_ * static_cast<long long>(k - 1);
  }
  Instant end_time() const { return time_at(length()); }

 private:
  Instant start_time_;
  Duration sample_period_;
  std::vector<double> values_;
};

// A component series defined on the 1-based index range [first(), last()]
// of its parent time series.
class Component {
 public:
  Component() = default;
  Component(std::size_t first, std::vector<double> values) : first_(first), values_(std::move(values)) {
    if (first_ == 0) throw UsageError("component indices are 1-based");
  }

  bool empty() const noexcept { return values_.empty(); }
  std::size_t size() const noexcept { return values_.size(); }
  std::size_t first() const noexcept { return first_; }
  std::size_t last() const noexcept { return first_ + values_.size() - 1; }
  bool contains(std::size_t k) const noexcept { return !empty() && k >= first_ && k <= last(); }

  double at(std::size_t k) const {
    if (!contains(k)) throw UsageError("index " + std::to_string(k) + " outside component domain");
    return values_[k - first_];
  }
  std::span<const double> values() const noexcept { return values_; }
  std::vector<double>& mutable_values() noexcept { return values_; }

  friend bool operator==(const Component&, const Component&) = default;

 private:
  std::size_t first_ = 1;
  std::vector<double> values_;
};

}  // namespace mediff
