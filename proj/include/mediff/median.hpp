#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "mediff/core_model.hpp"
#include "mediff/errors.hpp"

namespace mediff {

namespace detail {

inline double middle_of_sorted(std::span<const double> sorted) {
  const std::size_t n = sorted.size();
  const std::size_t mid = n / 2;
  if (n % 2 == 1) return sorted[mid];
  return 0.5 * (sorted[mid - 1] + sorted[mid]);
}

}  // namespace detail

// Median of values that are known to be present. Reorders `values`.
// Even counts return the mean of the two middle order statistics.
inline double median_inplace(std::vector<double>& values) {
  if (values.empty()) throw UsageError("median of an empty window");
  const std::size_t n = values.size();
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(values.begin(), mid, values.end());
  if (n % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(values.begin(), mid);
  return 0.5 * (lower + upper);
}

// MISSING entries are skipped; an all-MISSING window yields MISSING.
inline double median(std::span<const double> window) {
  if (window.empty()) throw UsageError("median of an empty window");
  std::vector<double> present;
  present.reserve(window.size());
  for (double v : window) {
    if (!is_missing(v)) present.push_back(v);
  }
  if (present.empty()) return kMissing;
  return median_inplace(present);
}

// Median of a sliding multiset. MISSING values are accepted by push/pop and
// simply never enter the ordered store.
class RollingMedian {
 public:
  explicit RollingMedian(std::size_t capacity_hint = 0) { sorted_.reserve(capacity_hint); }

  void push(double v) {
    if (is_missing(v)) return;
    sorted_.insert(std::upper_bound(sorted_.begin(), sorted_.end(), v), v);
  }

  void pop(double v) {
    if (is_missing(v)) return;
    const auto it = std::lower_bound(sorted_.begin(), sorted_.end(), v);
    if (it == sorted_.end() || *it != v) throw UsageError("RollingMedian::pop of a value not in the window");
    sorted_.erase(it);
  }

  std::size_t present_count() const noexcept { return sorted_.size(); }

  double value() const { return sorted_.empty() ? kMissing : detail::middle_of_sorted(sorted_); }

 private:
  std::vector<double> sorted_;
};

enum class EdgePolicy {
  kTruncate,  // emit only full windows: output[i] = median(x[i .. i + w - 1])
  kPrefix,    // emit one value per input: output[i] = median(x[max(0, i - w + 1) .. i])
};

// Backward-looking moving median, bit-identical to calling median() on
// each window.
inline std::vector<double> moving_median(std::span<const double> x, std::size_t window, EdgePolicy policy) {
  if (window == 0) throw UsageError("moving median window must be at least 1");
  std::vector<double> out;
  if (policy == EdgePolicy::kTruncate) {
    if (x.size() < window) return out;
    out.reserve(x.size() - window + 1);
  } else {
    out.reserve(x.size());
  }

  RollingMedian rolling(std::min(window, x.size()) + 1);
  for (std::size_t i = 0; i < x.size(); ++i) {
    rolling.push(x[i]);
    if (i >= window) rolling.pop(x[i - window]);
    if (policy == EdgePolicy::kPrefix || i + 1 >= window) out.push_back(rolling.value());
  }
  return out;
}

}  // namespace mediff
