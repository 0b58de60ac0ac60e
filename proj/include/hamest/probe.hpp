#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "hamest/model.hpp"
#include "hamest/types.hpp"

namespace hamest {

/// Normalized state on a tensor product; the first factor is the most
/// significant index of the amplitude vector.
class PureState {
 public:
  PureState(std::vector<int> factors, Vector amplitudes);

  const std::vector<int>& factors() const { return factors_; }
  const Vector& amplitudes() const { return amplitudes_; }
  Eigen::Index dim() const { return amplitudes_.size(); }

 private:
  std::vector<int> factors_;
  Vector amplitudes_;
};

/// Maximally entangled state d^{-1/2} sum_j |e_j>|e_j> on two d-dim factors.
PureState mes(int d);

/// Applies `op` to tensor factor `slot` of `psi` in place.
void apply_on_factor(Vector& psi, const std::vector<int>& factors, int slot, const Matrix& op);

/// Unitary on the full space sending factor perm[s] of the input to slot s of
/// the output. Permuted factors must have equal dimensions.
Matrix factor_permutation(const std::vector<int>& factors, const std::vector<int>& perm);

/// One segment of a feedback schedule: the optional (theta-independent)
/// unitary is applied first, then the driven channels evolve for `interval`.
struct ScheduleStep {
  std::optional<Matrix> feedback;
  double interval = 0.0;
};

/// r driven channels (the first r factors of the initial state) plus an
/// ancilla made of the remaining factors.
class Schedule {
 public:
  Schedule(int r, PureState initial, std::vector<ScheduleStep> steps);

  int r() const { return r_; }
  const PureState& initial() const { return initial_; }
  const std::vector<ScheduleStep>& steps() const { return steps_; }
  /// Sum of the intervals (wall time of each channel).
  double channel_time() const;
  /// One-channel-equivalent time resource r * channel_time().
  double total_time() const { return r_ * channel_time(); }

 private:
  int r_;
  PureState initial_;
  std::vector<ScheduleStep> steps_;
};

Schedule free_evolution(PureState initial, int r, double t);

/// Final state of the schedule under H_theta on every driven channel.
PureState evolve(const HamiltonianModel& model, const RealVector& theta, const Schedule& schedule);

/// State after `channel_time` of the schedule has elapsed (feedback applied at
/// a boundary belongs to the segment that starts there).
PureState evolve_until(const HamiltonianModel& model, const RealVector& theta,
                       const Schedule& schedule, double channel_time);

struct QfiReport {
  RealMatrix j;
  Matrix g;
  double trace_j = 0.0;
  double trace_g = 0.0;
  /// 4 c tau^2 with tau the one-channel-equivalent time.
  double bound_4ct2 = 0.0;
  std::optional<double> spherical_bound;
  double time = 0.0;
};

using StateFamily = std::function<Vector(const RealVector&)>;

/// QFI matrix of a pure-state family by central finite differences.
RealMatrix qfi_of_family(const StateFamily& family, const RealVector& theta,
                         double step = kTol.fd_step);

QfiReport qfi_matrix(const HamiltonianModel& model, const RealVector& theta,
                     const Schedule& schedule, double step = kTol.fd_step);

struct GrowthSample {
  double time = 0.0;
  double trace_j = 0.0;
  double four_trace_g = 0.0;
  double bound_4ct2 = 0.0;
};

struct AuditViolation {
  double time = 0.0;
  std::string what;
};

struct GrowthAudit {
  std::vector<GrowthSample> samples;
  std::vector<AuditViolation> violations;
  bool passed() const { return violations.empty(); }
};

/// Checks Tr J(t) <= 4 c t^2 and the growth-rate inequality on a uniform grid.
GrowthAudit growth_audit(const HamiltonianModel& model, const RealVector& theta,
                         const Schedule& schedule, int n_steps);

/// Slices needed so that symmetric Trotter splitting of an interval under
/// H - H_star stays within `tolerance` in operator norm, given norm bounds
/// on H and H_star and r driven channels.
int trotter_slices(double interval, double norm_h, double norm_h_star, int r,
                   double tolerance = 1e-6);

/// Replaces step `step_index` (evolution under H_theta) by `slices`
/// alternating evolution/feedback segments simulating H_theta - h_star.
Schedule trotterize(const Schedule& schedule, std::size_t step_index, const Matrix& h_star,
                    int slices);

}  // namespace hamest
