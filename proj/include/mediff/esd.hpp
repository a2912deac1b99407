#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mediff/config.hpp"
#include "mediff/core_model.hpp"
#include "mediff/errors.hpp"
#include "mediff/median.hpp"
#include "mediff/student_t.hpp"

namespace mediff {

// Generalized extreme Studentized deviate test for up to m outliers.
//
// Iteration i (1-based) scores the remaining sample, removes the observation
// with the largest |x - center| / scale and compares that score with
//
//   lambda_i = (n - i) t / sqrt((n - i - 1 + t^2)(n - i + 1)),
//   t = t-quantile at p = 1 - alpha / (2 (n - i + 1)) with n - i - 1 dof.
//
// The number of outliers is the largest i whose score exceeds lambda_i,
// even if some earlier score did not.

struct EsdIteration {
  std::size_t removed_index = 0;  // 1-based position in the input sample
  double removed_value = 0.0;
  double zscore = 0.0;
  double critical = 0.0;
  double center = 0.0;
  double scale = 0.0;  // after the zero-scale floor
};

struct EsdOutcome {
  std::size_t sample_size = 0;  // present (non-MISSING) observations
  std::vector<EsdIteration> iterations;
  std::size_t num_outliers = 0;
  std::vector<std::size_t> flagged;  // 1-based, ascending
};

inline double esd_critical_value(std::size_t n, std::size_t i, double alpha) {
  if (i < 1 || n < i + 2) throw UsageError("esd_critical_value: need n - i - 1 >= 1");
  const double remaining = static_cast<double>(n - i + 1);
  const double dof = static_cast<double>(n - i - 1);
  const double t = t_quantile_upper(alpha / (2.0 * remaining), dof);
  return static_cast<double>(n - i) * t / std::sqrt((dof + t * t) * remaining);
}

// Scales below max(1e-12, 1e-12 |center|) count as zero spread and are
// raised to that floor: values equal to the center then score 0 and clearly
// different values score astronomically high, while pure round-off noise
// stays far below any critical value.
inline double floor_scale(double scale, double center) {
  return std::max(scale, std::max(1e-12, 1e-12 * std::fabs(center)));
}

// MISSING entries of `residual` are excluded; reported indices always refer
// to positions in `residual`.
inline EsdOutcome esd_test(std::span<const double> residual, std::size_t max_outliers, double alpha, ZScoreMode mode,
                           MadScale mad_scale = MadScale::kNormal) {
  if (max_outliers < 1) throw UsageError("esd_test: max_outliers must be at least 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw UsageError("esd_test: alpha must lie in (0, 1)");

  struct Obs {
    double value;
    std::size_t index;
  };
  std::vector<Obs> remaining;
  remaining.reserve(residual.size());
  for (std::size_t i = 0; i < residual.size(); ++i) {
    if (!is_missing(residual[i])) remaining.push_back({residual[i], i + 1});
  }
  const std::size_t n = remaining.size();
  if (n < max_outliers + 3) {
    throw InsufficientDataError("esd_test: " + std::to_string(n) + " present observations, at least " +
                                    std::to_string(max_outliers + 3) + " needed for max_outliers=" +
                                    std::to_string(max_outliers),
                                max_outliers + 3);
  }

  const double mad_factor = mad_scale == MadScale::kNormal ? kMadNormalConsistency : 1.0;
  EsdOutcome out;
  out.sample_size = n;
  out.iterations.reserve(max_outliers);
  std::vector<double> scratch;
  scratch.reserve(n);

  for (std::size_t i = 1; i <= max_outliers; ++i) {
    const auto count = static_cast<double>(remaining.size());
    double center = 0.0;
    double scale = 0.0;
    if (mode == ZScoreMode::kRobustMad) {
      scratch.clear();
      for (const auto& o : remaining) scratch.push_back(o.value);
      center = median_inplace(scratch);
      for (double& v : scratch) v = std::fabs(v - center);
      scale = mad_factor * median_inplace(scratch);
    } else {
      double sum = 0.0;
      for (const auto& o : remaining) sum += o.value;
      center = sum / count;
      double ss = 0.0;
      for (const auto& o : remaining) ss += (o.value - center) * (o.value - center);
      scale = std::sqrt(ss / (count - 1.0));
    }
    scale = floor_scale(scale, center);

    std::size_t arg = 0;
    double best = -1.0;
    for (std::size_t r = 0; r < remaining.size(); ++r) {
      const double dev = std::fabs(remaining[r].value - center);
      if (dev > best) {
        best = dev;
        arg = r;
      }
    }

    EsdIteration it;
    it.removed_index = remaining[arg].index;
    it.removed_value = remaining[arg].value;
    it.zscore = best / scale;
    it.critical = esd_critical_value(n, i, alpha);
    it.center = center;
    it.scale = scale;
    out.iterations.push_back(it);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(arg));
  }

  for (std::size_t i = out.iterations.size(); i >= 1; --i) {
    if (out.iterations[i - 1].zscore > out.iterations[i - 1].critical) {
      out.num_outliers = i;
      break;
    }
  }
  for (std::size_t i = 0; i < out.num_outliers; ++i) out.flagged.push_back(out.iterations[i].removed_index);
  std::sort(out.flagged.begin(), out.flagged.end());
  return out;
}

}  // namespace mediff
