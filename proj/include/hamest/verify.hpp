#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "hamest/model.hpp"
#include "hamest/probe.hpp"

namespace hamest {

struct PropertyResult {
  std::string suite;
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Valid names: all, qfi, collective, resolution, bounds.
bool is_verify_suite(std::string_view suite);

/// Runs the invariant suites with fixed seeds. Unknown suite names throw.
std::vector<PropertyResult> run_verify(std::string_view suite);

/// Random feedback schedule on r channels of dimension d plus a d-dimensional
/// ancilla: Haar initial state, 1-4 intervals, Haar feedback unitaries, total
/// time r * sum(t_k) uniform in [0, max_total_time].
Schedule random_schedule(int d, int r, double max_total_time, Rng& rng);

/// Random model kind among full / phase / offdiag.
HamiltonianModel random_model(int d, Rng& rng);

}  // namespace hamest
