// hamest: run, sweep and verify Hamiltonian-estimation experiments.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "hamest/experiment.hpp"
#include "hamest/verify.hpp"

namespace {

using namespace hamest;

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  int jobs = 1;
};

ExperimentConfig resolve(const Common& c) {
  ExperimentConfig cfg = load_config(c.config);
  if (c.seed) cfg.seed = *c.seed;
  if (!c.out.empty()) cfg.out = c.out;
  if (c.jobs < 1) throw ValidationError("--jobs must be >= 1");
  return cfg;
}

std::string json_path(const std::string& csv) {
  std::filesystem::path p(csv);
  p.replace_extension(".json");
  return p.string();
}

// Writes `body` to `path`, or to `fallback` when no path is configured.
void emit(const std::string& path, const std::string& body, std::ostream& fallback) {
  if (path.empty()) {
    fallback << body;
    return;
  }
  std::ofstream f(path);
  if (!f) throw ResourceError("cannot write '" + path + "'");
  f << body;
}

int cmd_run(const Common& common) {
  const ExperimentConfig cfg = resolve(common);
  const int m = make_model(cfg.model, cfg.d).m();
  const std::vector<TrialResult> results = run_trials(cfg, common.jobs);
  std::ostringstream csv;
  write_csv(csv, cfg, m, results);
  emit(cfg.out, csv.str(), std::cout);
  const std::string summary = summary_json(summarize(results)) + "\n";
  if (!cfg.out.empty()) emit(json_path(cfg.out), summary, std::cout);
  (cfg.out.empty() ? std::cerr : std::cout) << summary;
  for (const TrialResult& r : results) {
    if (!r.error.empty()) std::cerr << "trial " << r.trial << ": " << r.error << "\n";
  }
  return 0;
}

std::vector<double> parse_delta_list(const std::string& list) {
  std::vector<double> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || item.find_first_not_of(" \t", used) != std::string::npos) {
      throw ValidationError("--delta-list: cannot parse '" + item + "'");
    }
    out.push_back(v);
  }
  return out;
}

int cmd_sweep(const Common& common, const std::string& delta_list) {
  const ExperimentConfig cfg = resolve(common);
  const std::vector<double> deltas = parse_delta_list(delta_list);
  validate_sweep(cfg, deltas);
  const int m = make_model(cfg.model, cfg.d).m();
  const SweepResult sweep = run_sweep(cfg, deltas, common.jobs);
  std::ostringstream csv;
  csv << kCsvHeader << '\n';
  for (std::size_t i = 0; i < sweep.trials.size(); ++i) {
    ExperimentConfig point = cfg;
    point.delta = sweep.trial_delta[i];
    csv << csv_row(point, m, sweep.trials[i]) << '\n';
  }
  emit(cfg.out, csv.str(), std::cout);
  const std::string summary = sweep_json(sweep) + "\n";
  if (!cfg.out.empty()) emit(json_path(cfg.out), summary, std::cout);
  (cfg.out.empty() ? std::cerr : std::cout) << summary;
  return 0;
}

int cmd_verify(const std::string& suite) {
  const std::vector<PropertyResult> results = run_verify(suite);
  int failed = 0;
  for (const PropertyResult& r : results) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.suite << ": " << r.name << " -- " << r.detail
              << "\n";
    if (!r.passed) ++failed;
  }
  std::cout << results.size() - failed << "/" << results.size() << " properties passed\n";
  return failed == 0 ? 0 : 1;
}

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "Experiment config file (key = value)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", c.seed, "Override the master seed");
  cmd->add_option("--out", c.out, "CSV output path (summary JSON written alongside)");
  cmd->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiparameter Hamiltonian estimation experiments"};
  app.require_subcommand(1);

  Common run_opts, sweep_opts;
  std::string delta_list;
  std::string suite = "all";

  CLI::App* run = app.add_subcommand("run", "Run seeded estimation trials");
  add_common(run, run_opts);
  CLI::App* sweep = app.add_subcommand("sweep", "Sweep delta and fit log(median T) vs log(delta)");
  add_common(sweep, sweep_opts);
  sweep->add_option("--delta-list", delta_list, "Comma-separated, strictly decreasing deltas")
      ->required();
  CLI::App* verify = app.add_subcommand("verify", "Run invariant suites");
  verify->add_option("suite", suite, "all | qfi | collective | resolution | bounds");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(run_opts);
    if (sweep->parsed()) return cmd_sweep(sweep_opts, delta_list);
    if (verify->parsed()) return cmd_verify(suite);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
