#pragma once

// Frozen synthetic corpora shared by the detector tests and the acceptance
// suite. Changing anything here changes the regression baselines.

#include <cstdint>

#include "mediff/evalbench.hpp"

namespace corpus {

inline constexpr int kQualitySeries = 20;
inline constexpr int kDstSeries = 10;
inline constexpr std::size_t kFirstDetectable = 10080 + 60;  // w_mu + w_r at defaults

inline mediff::SyntheticSpec base_spec(std::uint64_t seed) {
  mediff::SyntheticSpec spec;
  spec.series_id = "corpus-" + std::to_string(seed);
  spec.seed = seed;
  spec.weeks = 4;
  spec.noise_std = 1.0;
  spec.profile = mediff::default_profile(10.0, 20.0);
  spec.trend_slope = 1e-4;
  mediff::PortableRng plan_rng(seed * 7 + 1);
  mediff::AnomalyPlanOptions plan;
  plan.spikes = 6;
  plan.level_shifts = 4;
  plan.magnitude = 8.0 * spec.noise_std;
  plan.min_shift_duration = 30;
  plan.max_shift_duration = 120;
  plan.first_index = kFirstDetectable;
  mediff::plan_random_anomalies(spec, plan_rng, plan);
  return spec;
}

// Spikes and level shifts at 8 noise standard deviations.
inline mediff::SyntheticSpec quality_spec(int i) { return base_spec(1000 + static_cast<std::uint64_t>(i)); }

// Same composition plus a 60-sample seasonal shift at mid-batch.
inline mediff::SyntheticSpec dst_spec(int i) {
  auto spec = base_spec(5000 + static_cast<std::uint64_t>(i));
  spec.dst_shift = mediff::DstShiftPlan{spec.length() / 2 + 1, 60};
  return spec;
}

}  // namespace corpus
