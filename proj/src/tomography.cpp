#include <cmath>
#include <sstream>

#include "hamest/estimate.hpp"
#include "hamest/qcore.hpp"

namespace hamest {

TomographyAccumulator::TomographyAccumulator(int dim) : dim_(dim), sum_(Matrix::Zero(dim, dim)) {
  if (dim < 1) throw ValidationError("TomographyAccumulator: dimension must be positive");
}

void TomographyAccumulator::add_outcome(const Vector& outcome) { add_weighted(outcome, 1.0); }

void TomographyAccumulator::add_weighted(const Vector& outcome, double weight) {
  if (outcome.size() != dim_) throw ValidationError("tomography: outcome dimension mismatch");
  sum_.noalias() += weight * outcome * outcome.adjoint();
  weight_ += weight;
}

Matrix TomographyAccumulator::density() const {
  if (weight_ <= 0.0) throw ValidationError("tomography: no outcomes recorded");
  Matrix rho = (dim_ + 1.0) * sum_ / weight_ - Matrix::Identity(dim_, dim_);
  return (rho + rho.adjoint()) * 0.5;
}

Vector TomographyAccumulator::estimate() const {
  Eigen::SelfAdjointEigenSolver<Matrix> es(density());
  return es.eigenvectors().col(dim_ - 1);
}

namespace {

// Reusable buffers for repeated single-copy measurements in one dimension.
class RandomBasisMeter {
 public:
  explicit RandomBasisMeter(int dim) : dim_(dim), g_(dim, dim), q_(dim, dim), qr_(dim, dim) {}

  // Returns the index of the measured column of basis().
  Eigen::Index measure(const Vector& state, Rng& rng) {
    for (Eigen::Index j = 0; j < dim_; ++j) {
      for (Eigen::Index i = 0; i < dim_; ++i) g_(i, j) = Complex(normal_(rng), normal_(rng));
    }
    qr_.compute(g_);
    q_ = qr_.householderQ();
    const Matrix& r = qr_.matrixQR();
    for (Eigen::Index k = 0; k < dim_; ++k) {
      const double mag = std::abs(r(k, k));
      if (mag > 0.0) q_.col(k) *= r(k, k) / mag;
    }
    const double u = uniform_(rng);
    double acc = 0.0;
    for (Eigen::Index k = 0; k < dim_; ++k) {
      acc += std::norm(q_.col(k).dot(state));
      if (u < acc) return k;
    }
    return dim_ - 1;
  }

  const Matrix& basis() const { return q_; }

 private:
  Eigen::Index dim_;
  Matrix g_;
  Matrix q_;
  Eigen::HouseholderQR<Matrix> qr_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

void require_copies(long copies, Eigen::Index dim) {
  if (copies < dim) {
    std::ostringstream msg;
    msg << "tomography: " << copies << " copies is fewer than the dimension " << dim;
    throw ValidationError(msg.str());
  }
}

}  // namespace

Vector measure_random_basis(const Vector& state, Rng& rng) {
  RandomBasisMeter meter(static_cast<int>(state.size()));
  const Eigen::Index k = meter.measure(state, rng);
  return meter.basis().col(k);
}

std::vector<Vector> measure_copies(const Vector& state, long copies, Rng& rng) {
  RandomBasisMeter meter(static_cast<int>(state.size()));
  std::vector<Vector> out;
  out.reserve(static_cast<std::size_t>(std::max(0L, copies)));
  for (long i = 0; i < copies; ++i) {
    const Eigen::Index k = meter.measure(state, rng);
    out.push_back(meter.basis().col(k));
  }
  return out;
}

Vector tomography(const std::vector<Vector>& outcomes) {
  if (outcomes.empty()) throw ValidationError("tomography: no outcomes");
  const auto dim = outcomes.front().size();
  require_copies(static_cast<long>(outcomes.size()), dim);
  TomographyAccumulator acc(static_cast<int>(dim));
  for (const Vector& b : outcomes) acc.add_outcome(b);
  return acc.estimate();
}

Vector tomography(const Vector& state, long copies, Rng& rng) {
  require_copies(copies, state.size());
  RandomBasisMeter meter(static_cast<int>(state.size()));
  TomographyAccumulator acc(static_cast<int>(state.size()));
  for (long i = 0; i < copies; ++i) {
    const Eigen::Index k = meter.measure(state, rng);
    acc.add_outcome(meter.basis().col(k));
  }
  return acc.estimate();
}

double squared_infidelity(const Vector& a, const Vector& b) {
  const double overlap = std::norm(a.dot(b)) / (a.squaredNorm() * b.squaredNorm());
  return std::max(0.0, 1.0 - overlap);
}

double infidelity(const Vector& a, const Vector& b) { return std::sqrt(squared_infidelity(a, b)); }

}  // namespace hamest
