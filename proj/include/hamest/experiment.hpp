#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "hamest/estimate.hpp"
#include "hamest/model.hpp"

namespace hamest {

enum class Scheme { one_channel, adaptive, many_channel };

std::string_view to_string(Scheme scheme);
/// Throws ValidationError listing the valid scheme names.
Scheme parse_scheme(std::string_view name);

struct ExperimentConfig {
  ModelKind model = ModelKind::full;
  int d = 2;
  Scheme scheme = Scheme::adaptive;
  double delta = 0.1;
  double radius = 1.0;
  int trials = 100;
  std::uint64_t seed = 1;
  EstimationConstants constants;
  /// CSV path; the JSON summary goes next to it with a .json extension.
  std::string out;
  /// Sample ||theta|| in [0.95 E, E] instead of uniformly in the ball.
  bool worst_case_grid = false;
};

/// Flat `key = value` text, `#` starts a comment. Unknown keys are errors.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);
void validate(const ExperimentConfig& config);

std::uint64_t splitmix64(std::uint64_t& state);
/// Independent seed of trial `index` derived from the master seed.
std::uint64_t trial_seed(std::uint64_t master, std::uint64_t index);

/// Uniform in the radius-E ball, or in the shell [0.95 E, E] for worst-case runs.
RealVector sample_theta(int m, double radius, bool worst_case, Rng& rng);

struct TrialResult {
  int trial = 0;
  std::uint64_t seed = 0;
  EstimationRecord record;
  /// Non-empty when the trial raised an error (counted as a failure).
  std::string error;
};

TrialResult run_trial(const HamiltonianModel& model, const ExperimentConfig& config, int index);

/// Runs all trials on `jobs` workers; results are in trial-index order and do
/// not depend on the worker count.
std::vector<TrialResult> run_trials(const ExperimentConfig& config, int jobs = 1);

struct Summary {
  double success_rate = 0.0;
  double median_T = 0.0;
  double q1_T = 0.0;
  double q3_T = 0.0;
  int trials = 0;
};

Summary summarize(const std::vector<TrialResult>& results);

/// Linear-interpolated quantile of unsorted data.
double quantile(std::vector<double> values, double q);

extern const char* const kCsvHeader;
std::string csv_row(const ExperimentConfig& config, int m, const TrialResult& result);
void write_csv(std::ostream& out, const ExperimentConfig& config, int m,
               const std::vector<TrialResult>& results, bool header = true);

struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::vector<double> residuals;
};

/// Least-squares fit of log(y) against log(x).
LogLogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

struct SweepPoint {
  double delta = 0.0;
  Summary summary;
};

struct SweepResult {
  std::vector<SweepPoint> points;
  LogLogFit fit;
  std::vector<TrialResult> trials;
  std::vector<double> trial_delta;
};

/// Needs >= 3 strictly decreasing deltas, each with delta / E <= 1/5.
void validate_sweep(const ExperimentConfig& config, const std::vector<double>& deltas);
SweepResult run_sweep(const ExperimentConfig& config, const std::vector<double>& deltas,
                      int jobs = 1);

std::string summary_json(const Summary& summary);
std::string sweep_json(const SweepResult& sweep);

}  // namespace hamest
