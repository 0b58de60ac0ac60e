#include "hamest/bounds.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace hamest {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0)) {
    std::ostringstream msg;
    msg << "bounds: " << what << " must be positive";
    throw ValidationError(msg.str());
  }
}

double stage_sum(const BoundConstants& k) {
  // sum_{n>=1} (1 + beta n) / 2^n
  return 1.0 + 2.0 * k.beta;
}

}  // namespace

QcrChain qcr_chain(int m, int d, double delta, double tau, double copies) {
  require_positive(m, "m");
  require_positive(d, "d");
  require_positive(delta, "delta");
  require_positive(tau, "tau");
  require_positive(copies, "N");
  QcrChain out;
  out.trV_lower = 0.25 * m * d / (copies * tau * tau);
  out.tradeoff_ok = copies * tau * tau >= 0.25 * m * d / (delta * delta);
  return out;
}

double time_lower_bound(int m, int d, double delta) {
  require_positive(m, "m");
  require_positive(d, "d");
  require_positive(delta, "delta");
  return std::sqrt(static_cast<double>(m) * d) / (2.0 * delta);
}

NonsphericalBound nonspherical_time_lower(double c, int d, double delta) {
  require_positive(c, "c");
  require_positive(d, "d");
  require_positive(delta, "delta");
  NonsphericalBound out;
  // sqrt(md) / (2 delta) with m = c d.
  out.value = std::sqrt(c) * d / (2.0 * delta);
  out.as_printed = std::sqrt(c) * d / (2.0 * delta * delta);
  return out;
}

double fewparam_time_upper(int m, int d, double delta, double radius, const BoundConstants& k) {
  require_positive(m, "m");
  require_positive(d, "d");
  require_positive(delta, "delta");
  require_positive(radius, "E");
  return 4.0 * k.alpha * k.kappa * stage_sum(k) * std::pow(static_cast<double>(m), 1.5) *
         std::sqrt(static_cast<double>(d)) / delta;
}

double time_upper_general(int m, int d, double delta, const BoundConstants& k) {
  require_positive(m, "m");
  require_positive(d, "d");
  require_positive(delta, "delta");
  return 4.0 * k.alpha * k.kappa * stage_sum(k) * m * d / delta;
}

BoundReport bound_report(int m, int d, double delta, double radius, double tau,
                         const BoundConstants& k) {
  require_positive(tau, "tau");
  BoundReport r;
  r.qfi_upper = 4.0 * m * tau * tau / d;
  r.copies_lower = 0.25 * m * d / (delta * delta * tau * tau);
  r.time_lower = time_lower_bound(m, d, delta);
  r.time_upper_general = time_upper_general(m, d, delta, k);
  r.time_upper_fewparam = fewparam_time_upper(m, d, delta, radius, k);
  r.fewparam_exceeds_general = r.time_upper_fewparam > r.time_upper_general;
  r.constants_used = k;
  return r;
}

BiasedCramerRao biased_cr_rhs(const RealMatrix& j, const RealMatrix& d, double copies) {
  const Eigen::Index m = j.rows();
  if (j.cols() != m || d.rows() != m || d.cols() != m) {
    throw ValidationError("biased_cr_rhs: J and D must be square of the same size");
  }
  require_positive(copies, "N");
  const RealMatrix sym = 0.5 * (j + j.transpose());
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(sym);
  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  if (es.eigenvalues()(0) <= 1e-12 * scale) {
    std::ostringstream msg;
    msg << "biased_cr_rhs: J is singular or not positive definite (eigenvalue "
        << es.eigenvalues()(0) << ") along direction [" << es.eigenvectors().col(0).transpose()
        << "]";
    throw ValidationError(msg.str());
  }
  const RealMatrix a = RealMatrix::Identity(m, m) + d;
  const RealMatrix jinv = es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() *
                          es.eigenvectors().transpose();
  BiasedCramerRao out;
  out.matrix_bound_trace = (a * jinv * a.transpose()).trace() / copies;
  out.scalar_bound = a.trace() * a.trace() / (copies * sym.trace());
  return out;
}

}  // namespace hamest
