#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "hamest/model.hpp"
#include "hamest/probe.hpp"
#include "hamest/symsub.hpp"
#include "hamest/types.hpp"

namespace hamest {

// ---------------------------------------------------------------------------
// Postselection frame

/// Orthonormal basis {|Phi>, |1>, ..., |m>} of the probe space, where
/// |Phi> is the maximally entangled state on (symmetric space) x ancilla and
/// |j> = ({X_j}_r (x) I)|Phi> / sqrt(F2). Columns of `basis` are the frame
/// vectors; `norm_factor` = 1/sqrt(F2) (= sqrt(d) for one channel).
struct PostselectionFrame {
  int r = 1;
  int sym_dim = 0;
  Matrix basis;
  double norm_factor = 1.0;

  int m() const { return static_cast<int>(basis.cols()) - 1; }
  Eigen::Index probe_dim() const { return basis.rows(); }
};

PostselectionFrame make_frame(const HamiltonianModel& model, const SymSpace& space);
/// One-channel frame on C^d (x) C^d.
PostselectionFrame make_frame(const HamiltonianModel& model);

/// (W (x) I)|Phi> for an operator W on the D-dimensional driven space.
Vector apply_to_mes(const Matrix& w);

/// S(A) = (Tr A / d) I + sum_j Tr(A X_j) X_j.
Matrix superop_s(const HamiltonianModel& model, const Matrix& a);

struct PostselectionOutcome {
  bool accepted = false;
  /// Normalized frame coefficients <k|state> / sqrt(p_success).
  Vector reduced;
  double p_success = 0.0;
};

/// Frame coefficients and success probability without drawing acceptance.
PostselectionOutcome project_onto_frame(const PostselectionFrame& frame, const Vector& state);

PostselectionOutcome postselect(const PostselectionFrame& frame, const PureState& state, Rng& rng);

// ---------------------------------------------------------------------------
// Pure-state tomography from single-copy Haar-random-basis measurements

/// Accumulates outcome projectors and inverts rho = (D+1) <P> - I.
class TomographyAccumulator {
 public:
  explicit TomographyAccumulator(int dim);

  void add_outcome(const Vector& outcome);
  /// Adds a weighted projector (used to feed exact outcome frequencies).
  void add_weighted(const Vector& outcome, double weight);

  int dim() const { return dim_; }
  double count() const { return weight_; }
  /// Linear-inversion density estimate (Hermitian part).
  Matrix density() const;
  /// Top eigenvector of density().
  Vector estimate() const;

 private:
  int dim_;
  Matrix sum_;
  double weight_ = 0.0;
};

/// Draws a Haar basis and returns the outcome vector selected by the Born rule.
Vector measure_random_basis(const Vector& state, Rng& rng);

std::vector<Vector> measure_copies(const Vector& state, long copies, Rng& rng);

/// Estimate from recorded outcome vectors; needs at least dim outcomes.
Vector tomography(const std::vector<Vector>& outcomes);

/// Measures `copies` copies of `state` and returns the estimate.
Vector tomography(const Vector& state, long copies, Rng& rng);

double squared_infidelity(const Vector& a, const Vector& b);

// ---------------------------------------------------------------------------
// Parameter inversion

/// First-order inversion theta_j = -(norm_factor / tau) Im(c_j / c_0).
RealVector invert_theta(const Vector& reduced, double tau, const PostselectionFrame& frame);

using ReducedFamily = std::function<Vector(const RealVector&)>;

/// Gauss-Newton steps fitting the exact reduced-state family to `reduced`
/// (both brought to the gauge c_0 > 0), starting from `start`.
RealVector refine_theta(const Vector& reduced, const ReducedFamily& family,
                        const RealVector& start, int steps);

// ---------------------------------------------------------------------------
// delta-resolution

/// Infidelity sqrt(1 - |<a|b>|^2) of two normalized vectors.
double infidelity(const Vector& a, const Vector& b);

/// Sampled infimum of the probe infidelity over pairs in the radius-E ball
/// at distance >= delta (most samples on the boundary distance = delta).
double delta_resolution(const HamiltonianModel& model, double tau, double radius, double delta,
                        int n_pairs, Rng& rng, const PostselectionFrame* frame = nullptr);

// ---------------------------------------------------------------------------
// Estimation procedures

struct EstimationConstants {
  double kappa = 0.3;
  double alpha = 40.0;
  double beta = 1.0;
  double p_crit = 0.05;
  /// 0 means the default 2048 / d.
  int r_max = 0;
  int refine_steps = 1;
  bool trotterize = false;
  double trotter_tolerance = 1e-6;
  double min_acceptance = 0.01;
  int max_retries = 4;

  int channel_cap(int d) const { return r_max > 0 ? r_max : 2048 / d; }
};

struct StageRecord {
  int n = 0;
  double tau = 0.0;
  long copies = 0;
  int channels = 1;
  double acceptance = 0.0;
  double radius = 0.0;
  bool ok = true;
};

struct EstimationRecord {
  RealVector theta_true;
  RealVector theta_hat;
  double error = 0.0;
  std::vector<StageRecord> stages;
  double total_time = 0.0;
  bool success = false;
  std::uint64_t seed = 0;
};

/// Number of halving stages n0 = ceil(log2(E / delta)), at least 0.
int stage_count(double radius, double delta);

/// Probe evolution time scale E sqrt(c) used to set tau = kappa / (E sqrt(c)).
double time_scale(const HamiltonianModel& model, double radius);

long one_channel_copies(const HamiltonianModel& model, double radius, double delta,
                        const EstimationConstants& k);
long stage_copies(const HamiltonianModel& model, int n, const EstimationConstants& k);

EstimationRecord run_one_channel(const HamiltonianModel& model, const RealVector& theta_true,
                                 double delta, double radius, const EstimationConstants& k,
                                 std::uint64_t seed);

EstimationRecord run_adaptive(const HamiltonianModel& model, const RealVector& theta_true,
                              double delta, double radius, const EstimationConstants& k,
                              std::uint64_t seed);

EstimationRecord run_many_channel(const HamiltonianModel& model, const RealVector& theta_true,
                                  double delta, double radius, const EstimationConstants& k,
                                  std::uint64_t seed);

/// Result of one postselect-tomography-invert cycle.
struct StageEstimate {
  RealVector theta_hat;
  /// Final (successful) attempt.
  StageRecord record;
  /// Every attempt including retries with a halved evolution time.
  std::vector<StageRecord> attempts;
};

/// One adaptive stage: evolve under H_{theta - prior} for tau, estimate the
/// residual from `copies` probes and return prior + residual.
StageEstimate adaptive_stage(const HamiltonianModel& model, const RealVector& theta_true,
                             const RealVector& prior, double tau, long copies,
                             const EstimationConstants& k, Rng& rng);

/// One many-channel stage with r channels: probe e^{-i tau {H_theta}_r}|Phi_r>,
/// counter-rotated by e^{i tau {H_prior}_r} before postselection.
StageEstimate many_channel_stage(const HamiltonianModel& model, const RealVector& theta_true,
                                 const RealVector& prior, double tau, int r, long copies,
                                 const EstimationConstants& k, Rng& rng);

}  // namespace hamest
