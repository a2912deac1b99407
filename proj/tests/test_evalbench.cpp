#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <vector>

#include "mediff/decompose.hpp"
#include "mediff/evalbench.hpp"

using namespace mediff;
using Idx = std::vector<std::size_t>;

TEST(Condense, Examples) {
  EXPECT_EQ(condense({100, 101, 102, 500}), (Idx{100, 500}));
  EXPECT_EQ(condense({}), Idx{});
  EXPECT_EQ(condense({7}), Idx{7});
}

TEST(Condense, Idempotent) {
  const Idx x{3, 4, 5, 9, 11, 12, 40};
  EXPECT_EQ(condense(condense(x)), condense(x));
}

TEST(MatchAndScore, WithinBudgetIsTruePositive) {
  const auto r = match_and_score({1007}, {1000});
  EXPECT_EQ(r.tp, 1u);
  EXPECT_EQ(r.fp, 0u);
  EXPECT_EQ(r.fn, 0u);
  EXPECT_EQ(match_and_score({1010}, {1000}).tp, 1u);
}

TEST(MatchAndScore, LateOrEarlyDetectionMisses) {
  const auto late = match_and_score({1015}, {1000});
  EXPECT_EQ(late.tp, 0u);
  EXPECT_EQ(late.fp, 1u);
  EXPECT_EQ(late.fn, 1u);
  EXPECT_EQ(match_and_score({999}, {1000}).tp, 0u);
}

TEST(MatchAndScore, BudgetScalesWithSamplePeriod) {
  EXPECT_EQ(match_and_score({1002}, {1000}, std::chrono::minutes{5}).tp, 1u);
  EXPECT_EQ(match_and_score({1003}, {1000}, std::chrono::minutes{5}).tp, 0u);
}

TEST(MatchAndScore, OneToOneGreedy) {
  const auto r = match_and_score({1001, 1002}, {1000});
  EXPECT_EQ(r.tp, 1u);
  EXPECT_EQ(r.fp, 1u);
  const auto two = match_and_score({1005, 1006}, {1000, 1004});
  EXPECT_EQ(two.tp, 2u);
}

TEST(MatchAndScore, TranslationSymmetric) {
  const Idx d{50, 120, 131, 400}, l{45, 125, 300};
  const auto a = match_and_score(d, l);
  Idx d2, l2;
  for (auto x : d) d2.push_back(x + 7777);
  for (auto x : l) l2.push_back(x + 7777);
  const auto b = match_and_score(d2, l2);
  EXPECT_EQ(a.tp, b.tp);
  EXPECT_EQ(a.fp, b.fp);
  EXPECT_EQ(a.fn, b.fn);
}

TEST(MatchAndScore, ExactDetectionsArePerfect) {
  const auto r = match_and_score({5, 90, 1000}, {5, 90, 1000});
  EXPECT_EQ(r.precision, 1.0);
  EXPECT_EQ(r.recall, 1.0);
  EXPECT_EQ(r.f1, 1.0);
}

TEST(Metrics, Arithmetic) {
  const auto r = score_counts(2, 1, 2);
  EXPECT_DOUBLE_EQ(r.precision, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(r.recall, 0.5);
  EXPECT_NEAR(r.f1, 4.0 / 7.0, 1e-15);
  const auto z = score_counts(0, 0, 0);
  EXPECT_EQ(z.precision, 0.0);
  EXPECT_EQ(z.f1, 0.0);
}

TEST(Metrics, TableHasBothAverages) {
  const std::vector<MetricsRow> series{{"a", 2, score_counts(2, 0, 0), 1.0}, {"b", 1, score_counts(0, 1, 1), 0.5}};
  const std::vector<MetricsRow> batches{{"a#1", 1, score_counts(1, 0, 0), 0.5},
                                        {"a#2", 1, score_counts(1, 0, 0), 0.5},
                                        {"b#1", 1, score_counts(0, 1, 1), 0.5}};
  const auto table = format_metrics_table(series, batches);
  EXPECT_EQ(table.rfind("series,batches,precision,recall,f1,tp,fp,fn,running_time_s\n", 0), 0u);
  EXPECT_NE(table.find("\na,2,1,1,1,2,0,0,1\n"), std::string::npos);
  EXPECT_NE(table.find("\nmean_over_series,3,0.5,"), std::string::npos);
  EXPECT_NE(table.find("\nmean_over_batches,3,"), std::string::npos);
}

TEST(Labels, JsonRoundTripAndValidation) {
  const LabelSet l{"x", {3, 10, 99}};
  const auto back = labels_from_json(labels_to_json(l));
  EXPECT_EQ(back.series_id, "x");
  EXPECT_EQ(back.labels, l.labels);
  EXPECT_THROW(labels_from_json(nlohmann::json::parse(R"({"labels": [5, 5]})")), ParseError);
  EXPECT_THROW(labels_from_json(nlohmann::json::parse(R"({"labels": [0]})")), ParseError);
  EXPECT_THROW(l.validate(50), UsageError);
}

TEST(PortableRngTest, KnownSequence) {
  PortableRng a(7), b(7), c(8);
  for (int i = 0; i < 100; ++i) {
    const double x = a.normal();
    EXPECT_EQ(x, b.normal());
    EXPECT_TRUE(std::isfinite(x));
  }
  EXPECT_NE(PortableRng(7).uniform(), c.uniform());
  PortableRng d(1);
  for (int i = 0; i < 1000; ++i) {
    const auto v = d.uniform_index(3, 9);
    EXPECT_GE(v, 3u);
    EXPECT_LE(v, 9u);
  }
}

TEST(Synthetic, QuietSeriesIsPeriodicAfterDetrend) {
  SyntheticSpec spec;
  spec.weeks = 3;
  spec.season_len = 1440;
  spec.noise_std = 0.0;
  spec.profile = {{1440, 9.0, 0.2}, {360, 2.0, 0.0}};
  const auto syn = generate_synthetic(spec);
  EXPECT_TRUE(syn.labels.labels.empty());
  EXPECT_TRUE(syn.calendar.empty());
  const auto y = syn.series.values();
  for (std::size_t k = 0; k + 1440 < y.size(); ++k) EXPECT_EQ(y[k], y[k + 1440]);
}

TEST(Synthetic, LabelsMarkEventStarts) {
  SyntheticSpec spec;
  spec.seed = 3;
  spec.spikes = {{20000, 8.0}};
  EXPECT_EQ(generate_synthetic(spec).labels.labels, (Idx{20000}));
  spec.spikes.clear();
  spec.level_shifts = {{30000, 120, 8.0}};
  const auto syn = generate_synthetic(spec);
  EXPECT_EQ(syn.labels.labels, (Idx{30000}));
  const auto y = syn.series.values();
  SyntheticSpec clean = spec;
  clean.level_shifts.clear();
  const auto base = generate_synthetic(clean).series.values();
  EXPECT_DOUBLE_EQ(y[30000 - 1] - base[30000 - 1], 8.0);
  EXPECT_DOUBLE_EQ(y[30119 - 1] - base[30119 - 1], 8.0);
  EXPECT_EQ(y[30120], base[30120]);
}

TEST(Synthetic, SameSeedBitIdentical) {
  SyntheticSpec spec;
  spec.seed = 99;
  spec.profile = default_profile(10, 20);
  spec.missing = {5, 6};
  PortableRng rng(1);
  plan_random_anomalies(spec, rng, {});
  const auto a = generate_synthetic(spec);
  const auto b = generate_synthetic(spec);
  ASSERT_EQ(a.series.length(), 40320u);
  EXPECT_EQ(std::memcmp(a.series.values().data(), b.series.values().data(), 40320 * sizeof(double)), 0);
  EXPECT_EQ(a.labels.labels, b.labels.labels);
  EXPECT_EQ(a.labels.labels.size(), 10u);
  EXPECT_TRUE(is_missing(a.series.value(5)));
}

TEST(Synthetic, DstShiftAndHolidayProduceCalendar) {
  SyntheticSpec spec;
  spec.dst_shift = DstShiftPlan{20161, 60};
  spec.holiday = HolidayPlan{30000, 31439, 15.0, "founders day"};
  const auto syn = generate_synthetic(spec);
  ASSERT_EQ(syn.calendar.dst_transitions.size(), 1u);
  EXPECT_EQ(syn.calendar.dst_transitions[0], syn.series.time_at(20161));
  ASSERT_EQ(syn.calendar.holidays.size(), 1u);
  EXPECT_EQ(syn.calendar.holidays[0].label, "founders day");
  EXPECT_TRUE(syn.labels.labels.empty());
}

TEST(Synthetic, ContradictoryPlansRejected) {
  SyntheticSpec spec;
  spec.spikes = {{50000, 8.0}};
  EXPECT_THROW(generate_synthetic(spec), UsageError);
  spec.spikes.clear();
  spec.level_shifts = {{40300, 100, 8.0}};
  EXPECT_THROW(generate_synthetic(spec), UsageError);
  SyntheticSpec one_week;
  one_week.weeks = 1;
  EXPECT_THROW(generate_synthetic(one_week), UsageError);
}
