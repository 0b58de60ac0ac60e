#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "hamest/experiment.hpp"

namespace hamest {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t trial_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t state = master;
  const std::uint64_t base = splitmix64(state);
  state = base ^ (index * 0xd1b54a32d192ed03ULL);
  return splitmix64(state);
}

RealVector sample_theta(int m, double radius, bool worst_case, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  RealVector u(m);
  do {
    for (int i = 0; i < m; ++i) u(i) = normal(rng);
  } while (u.norm() == 0.0);
  u.normalize();
  double rho;
  if (worst_case) {
    rho = radius * (0.95 + 0.05 * uniform(rng));
  } else {
    rho = radius * std::pow(uniform(rng), 1.0 / m);
  }
  return rho * u;
}

TrialResult run_trial(const HamiltonianModel& model, const ExperimentConfig& config, int index) {
  TrialResult out;
  out.trial = index;
  out.seed = trial_seed(config.seed, static_cast<std::uint64_t>(index));
  std::uint64_t state = out.seed;
  Rng theta_rng(splitmix64(state));
  const std::uint64_t run_seed = splitmix64(state);
  const RealVector theta =
      sample_theta(model.m(), config.radius, config.worst_case_grid, theta_rng);
  try {
    switch (config.scheme) {
      case Scheme::one_channel:
        out.record = run_one_channel(model, theta, config.delta, config.radius, config.constants,
                                     run_seed);
        break;
      case Scheme::adaptive:
        out.record =
            run_adaptive(model, theta, config.delta, config.radius, config.constants, run_seed);
        break;
      case Scheme::many_channel:
        out.record = run_many_channel(model, theta, config.delta, config.radius, config.constants,
                                      run_seed);
        break;
    }
  } catch (const Error& e) {
    out.error = e.what();
    out.record = EstimationRecord{};
    out.record.theta_true = theta;
    out.record.error = std::nan("");
    out.record.success = false;
  }
  out.record.seed = out.seed;
  return out;
}

std::vector<TrialResult> run_trials(const ExperimentConfig& config, int jobs) {
  validate(config);
  const HamiltonianModel model = make_model(config.model, config.d);
  std::vector<TrialResult> results(static_cast<std::size_t>(config.trials));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < config.trials; i = next++) {
      results[static_cast<std::size_t>(i)] = run_trial(model, config, i);
    }
  };
  jobs = std::clamp(jobs, 1, config.trials);
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  return results;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) return std::nan("");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

Summary summarize(const std::vector<TrialResult>& results) {
  Summary s;
  s.trials = static_cast<int>(results.size());
  std::vector<double> times;
  int ok = 0;
  for (const TrialResult& r : results) {
    if (r.record.success) ++ok;
    if (r.error.empty()) times.push_back(r.record.total_time);
  }
  s.success_rate = results.empty() ? 0.0 : static_cast<double>(ok) / results.size();
  s.median_T = quantile(times, 0.5);
  s.q1_T = quantile(times, 0.25);
  s.q3_T = quantile(times, 0.75);
  return s;
}

const char* const kCsvHeader = "trial,seed,scheme,d,m,delta,E,theta_err,total_time,success,stages";

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string csv_row(const ExperimentConfig& config, int m, const TrialResult& r) {
  std::ostringstream row;
  row << r.trial << ',' << r.seed << ',' << to_string(config.scheme) << ',' << config.d << ','
      << m << ',' << fmt(config.delta) << ',' << fmt(config.radius) << ','
      << fmt(r.record.error) << ',' << fmt(r.record.total_time) << ','
      << (r.record.success ? 1 : 0) << ',';
  if (!r.error.empty()) {
    row << "error";
  } else {
    for (std::size_t i = 0; i < r.record.stages.size(); ++i) {
      const StageRecord& s = r.record.stages[i];
      if (i) row << ';';
      row << s.n << ':' << fmt(s.tau) << ':' << s.copies << ':' << fmt(s.acceptance);
    }
  }
  return row.str();
}

void write_csv(std::ostream& out, const ExperimentConfig& config, int m,
               const std::vector<TrialResult>& results, bool header) {
  if (header) out << kCsvHeader << '\n';
  for (const TrialResult& r : results) out << csv_row(config, m, r) << '\n';
}

LogLogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw ValidationError("fit_loglog: need at least two matching points");
  }
  const std::size_t n = x.size();
  RealMatrix a(n, 2);
  RealVector b(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw ValidationError("fit_loglog: values must be > 0");
    a(i, 0) = std::log(x[i]);
    a(i, 1) = 1.0;
    b(i) = std::log(y[i]);
  }
  const RealVector coef = a.colPivHouseholderQr().solve(b);
  LogLogFit fit;
  fit.slope = coef(0);
  fit.intercept = coef(1);
  const RealVector res = b - a * coef;
  fit.residuals.assign(res.data(), res.data() + n);
  return fit;
}

void validate_sweep(const ExperimentConfig& config, const std::vector<double>& deltas) {
  if (deltas.size() < 3) throw ValidationError("sweep: need at least 3 delta values");
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (!(deltas[i] > 0.0)) throw ValidationError("sweep: delta values must be positive");
    if (deltas[i] / config.radius > 0.2 + 1e-12) {
      throw ValidationError("sweep: delta " + fmt(deltas[i]) + " violates delta/E <= 1/5");
    }
    if (i > 0 && !(deltas[i] < deltas[i - 1])) {
      throw ValidationError("sweep: delta values must be strictly decreasing");
    }
  }
}

SweepResult run_sweep(const ExperimentConfig& config, const std::vector<double>& deltas,
                      int jobs) {
  validate_sweep(config, deltas);
  SweepResult out;
  std::vector<double> medians;
  for (double delta : deltas) {
    ExperimentConfig c = config;
    c.delta = delta;
    std::vector<TrialResult> trials = run_trials(c, jobs);
    out.points.push_back({delta, summarize(trials)});
    medians.push_back(out.points.back().summary.median_T);
    for (TrialResult& t : trials) {
      out.trials.push_back(std::move(t));
      out.trial_delta.push_back(delta);
    }
  }
  out.fit = fit_loglog(deltas, medians);
  return out;
}

namespace {

nlohmann::json summary_object(const Summary& s) {
  // Non-finite values (no successful trial) serialize as null.
  return {{"success_rate", s.success_rate},
          {"median_T", s.median_T},
          {"q1_T", s.q1_T},
          {"q3_T", s.q3_T},
          {"trials", s.trials}};
}

}  // namespace

std::string summary_json(const Summary& s) { return summary_object(s).dump(2); }

std::string sweep_json(const SweepResult& sweep) {
  nlohmann::json points = nlohmann::json::array();
  for (const SweepPoint& p : sweep.points) {
    nlohmann::json o = summary_object(p.summary);
    o["delta"] = p.delta;
    points.push_back(std::move(o));
  }
  const nlohmann::json j = {{"slope", sweep.fit.slope},
                            {"intercept", sweep.fit.intercept},
                            {"residuals", sweep.fit.residuals},
                            {"points", std::move(points)}};
  return j.dump(2);
}

}  // namespace hamest
