#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mediff/cli.hpp"

namespace {

struct Flags {
  std::vector<std::string> inputs;
  std::string config;
  std::string calendar;
  std::string output;
  std::vector<std::string> labels;
  std::vector<std::string> sets;
};

void add_common(CLI::App* sub, Flags& f, mediff::cli::RunManifest& m) {
  sub->add_option("--input", f.inputs, "Series CSV (timestamp,value); repeatable")->required();
  sub->add_option("--config", f.config, "Detector config (JSON)");
  sub->add_option("--calendar", f.calendar, "DST/holiday calendar (JSON)");
  sub->add_option("--output", f.output, "Output file")->required();

  auto add_override = [&](const char* flag, const char* key, const char* help) {
    sub->add_option_function<std::string>(
        flag, [&m, key](const std::string& v) { m.overrides.emplace_back(key, v); }, help);
  };
  add_override("--beta", "beta", "DST seasonal weight in [0,1]");
  add_override("--gamma", "gamma", "Requested event component (0 or 1)");
  add_override("--alpha", "alpha", "ESD significance level");
  add_override("--max-outliers", "max_outliers", "ESD upper bound m, or 'auto'");
  add_override("--window-trend", "w_mu", "Trend window (samples)");
  add_override("--window-seasonal", "w_s", "Seasonal half-window (samples)");
  add_override("--window-seasonal-trend", "w_s_hat", "Seasonal-trend window (samples)");
  add_override("--window-event", "w_r", "Event window (samples)");
  add_override("--season-len", "season_len", "Samples per season");
  add_override("--zscore-mode", "zscore_mode", "robust_mad or classic");
  add_override("--mad-scale", "mad_scale", "normal or raw");
  add_override("--batch-len", "batch_len", "Samples per detection batch");
  add_override("--stride", "stride", "Samples between batch starts");
  sub->add_option("--set", f.sets, "Generic override key=value; repeatable");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust seasonal anomaly detection"};
  app.require_subcommand(1);

  mediff::cli::RunManifest m;
  Flags f;

  auto* detect = app.add_subcommand("detect", "Detect anomalies and write a JSON report");
  add_common(detect, f, m);

  auto* decompose = app.add_subcommand("decompose", "Write the decomposition trace as CSV");
  add_common(decompose, f, m);

  auto* eval = app.add_subcommand("eval", "Score detections against labels and write a metrics table");
  add_common(eval, f, m);
  eval->add_option("--labels", f.labels, "Label file (JSON) per input; repeatable")->required();

  auto* synth = app.add_subcommand("synth", "Generate a labeled synthetic series into a directory");
  synth->add_option("--output", f.output, "Output directory")->required();
  synth->add_option("--config", f.config, "Detector config (JSON) for season/window lengths");
  synth->add_option("--seed", m.seed, "Random seed")->required();
  synth->add_option("--weeks", m.synth.weeks, "Number of seasons");
  synth->add_option("--noise-std", m.synth.noise_std, "Gaussian noise standard deviation");
  synth->add_option("--magnitude", m.synth.magnitude_sigmas, "Anomaly magnitude in noise standard deviations");
  synth->add_option("--spikes", m.synth.spikes, "Number of spikes");
  synth->add_option("--level-shifts", m.synth.level_shifts, "Number of level shifts");
  synth->add_option("--trend-slope", m.synth.trend_slope, "Trend per sample");
  synth->add_option("--weekly-amplitude", m.synth.weekly_amplitude, "Weekly wave amplitude");
  synth->add_option("--daily-amplitude", m.synth.daily_amplitude, "Daily wave amplitude");
  synth->add_option("--dst-shift", m.synth.dst_shift, "Seasonal shift in samples at mid-series (0 = none)");
  synth->add_flag("--holiday", m.synth.holiday, "Add a holiday dip and calendar entry");
  synth->add_option("--set", f.sets, "Generic override key=value; repeatable");

  CLI11_PARSE(app, argc, argv);

  if (detect->parsed()) m.command = mediff::cli::Command::kDetect;
  if (decompose->parsed()) m.command = mediff::cli::Command::kDecompose;
  if (eval->parsed()) m.command = mediff::cli::Command::kEval;
  if (synth->parsed()) m.command = mediff::cli::Command::kSynth;

  for (const auto& in : f.inputs) m.inputs.emplace_back(in);
  for (const auto& l : f.labels) m.labels.emplace_back(l);
  if (!f.config.empty()) m.config = f.config;
  if (!f.calendar.empty()) m.calendar = f.calendar;
  m.output = f.output;
  for (const auto& s : f.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      std::cerr << "error: --set expects key=value, got '" << s << "'\n";
      return 2;
    }
    m.overrides.emplace_back(s.substr(0, eq), s.substr(eq + 1));
  }
  return mediff::cli::run(m, std::cerr);
}
