#include <cmath>
#include <sstream>

#include "hamest/estimate.hpp"
#include "hamest/qcore.hpp"

namespace hamest {

Vector apply_to_mes(const Matrix& w) {
  const Eigen::Index dim = w.rows();
  Vector v(dim * dim);
  const double s = 1.0 / std::sqrt(static_cast<double>(dim));
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) v(i * dim + j) = w(i, j) * s;
  }
  return v;
}

PostselectionFrame make_frame(const HamiltonianModel& model, const SymSpace& space) {
  if (space.d() != model.d()) throw ValidationError("make_frame: space and model dimensions differ");
  const int dim = space.dim();
  const int m = model.m();
  const double f2 = collective_f2(space.d(), space.r());
  PostselectionFrame frame;
  frame.r = space.r();
  frame.sym_dim = dim;
  frame.norm_factor = 1.0 / std::sqrt(f2);
  frame.basis.resize(static_cast<Eigen::Index>(dim) * dim, m + 1);
  frame.basis.col(0) = apply_to_mes(Matrix::Identity(dim, dim));
  for (int j = 0; j < m; ++j) {
    frame.basis.col(j + 1) = apply_to_mes(collective(space, model.generator(j))) * frame.norm_factor;
  }
  const Matrix gram = frame.basis.adjoint() * frame.basis;
  const double defect = max_abs(gram - Matrix::Identity(m + 1, m + 1));
  if (defect > kTol.frame_gram) {
    std::ostringstream msg;
    msg << "make_frame: frame is not orthonormal (max Gram defect " << defect << ")";
    throw ValidationError(msg.str());
  }
  return frame;
}

PostselectionFrame make_frame(const HamiltonianModel& model) {
  return make_frame(model, occupation_space(model.d(), 1));
}

Matrix superop_s(const HamiltonianModel& model, const Matrix& a) {
  if (a.rows() != model.d() || a.cols() != model.d()) {
    throw ValidationError("superop_s: operator dimension does not match model");
  }
  Matrix out = (a.trace() / static_cast<double>(model.d())) * Matrix::Identity(model.d(), model.d());
  for (const Matrix& x : model.generators()) out += (a * x).trace() * x;
  return out;
}

PostselectionOutcome project_onto_frame(const PostselectionFrame& frame, const Vector& state) {
  if (state.size() != frame.probe_dim()) {
    std::ostringstream msg;
    msg << "postselect: state dimension " << state.size() << " does not match frame dimension "
        << frame.probe_dim();
    throw ValidationError(msg.str());
  }
  PostselectionOutcome out;
  const Vector coeffs = frame.basis.adjoint() * state;
  out.p_success = coeffs.squaredNorm();
  if (out.p_success < kTol.min_postselection) {
    throw DegenerateProjectionError("postselect: state is orthogonal to the frame");
  }
  out.reduced = coeffs / std::sqrt(out.p_success);
  return out;
}

PostselectionOutcome postselect(const PostselectionFrame& frame, const PureState& state, Rng& rng) {
  PostselectionOutcome out = project_onto_frame(frame, state.amplitudes());
  std::bernoulli_distribution accept(std::min(1.0, out.p_success));
  out.accepted = accept(rng);
  return out;
}

RealVector invert_theta(const Vector& reduced, double tau, const PostselectionFrame& frame) {
  if (reduced.size() != frame.m() + 1) throw ValidationError("invert_theta: dimension mismatch");
  if (!(tau > 0.0)) throw ValidationError("invert_theta: tau must be positive");
  const double norm = reduced.norm();
  const Complex c0 = reduced(0) / norm;
  if (std::abs(c0) < kTol.min_reference_amplitude) {
    std::ostringstream msg;
    msg << "invert_theta: reference amplitude |c0| = " << std::abs(c0) << " below "
        << kTol.min_reference_amplitude << "; retry with a shorter evolution time";
    throw InversionUnstableError(msg.str());
  }
  RealVector theta(frame.m());
  for (int j = 0; j < frame.m(); ++j) {
    theta(j) = -(frame.norm_factor / tau) * (reduced(j + 1) / reduced(0)).imag();
  }
  return theta;
}

namespace {

RealVector gauge_fixed_residual_coords(const Vector& v) {
  const Complex phase = std::abs(v(0)) > 0.0 ? std::conj(v(0)) / std::abs(v(0)) : Complex(1.0);
  const Vector g = v * phase / v.norm();
  RealVector out(2 * g.size());
  out << g.real(), g.imag();
  return out;
}

}  // namespace

RealVector refine_theta(const Vector& reduced, const ReducedFamily& family,
                        const RealVector& start, int steps) {
  const RealVector target = gauge_fixed_residual_coords(reduced);
  RealVector theta = start;
  const Eigen::Index m = start.size();
  for (int it = 0; it < steps; ++it) {
    const RealVector base = gauge_fixed_residual_coords(family(theta));
    const RealVector residual = base - target;
    RealMatrix jac(residual.size(), m);
    const double h = 1e-6 * std::max(1.0, theta.norm());
    for (Eigen::Index j = 0; j < m; ++j) {
      RealVector plus = theta, minus = theta;
      plus(j) += h;
      minus(j) -= h;
      jac.col(j) = (gauge_fixed_residual_coords(family(plus)) -
                    gauge_fixed_residual_coords(family(minus))) / (2.0 * h);
    }
    const RealVector step = jac.colPivHouseholderQr().solve(-residual);
    if (!step.allFinite()) break;
    theta += step;
  }
  return theta;
}

}  // namespace hamest
