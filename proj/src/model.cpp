#include "hamest/model.hpp"

#include <cmath>
#include <sstream>

#include "hamest/qcore.hpp"

namespace hamest {

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::full: return "full";
    case ModelKind::phase: return "phase";
    case ModelKind::offdiag: return "offdiag";
    case ModelKind::custom: return "custom";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view name) {
  if (name == "full") return ModelKind::full;
  if (name == "phase") return ModelKind::phase;
  if (name == "offdiag") return ModelKind::offdiag;
  if (name == "custom") return ModelKind::custom;
  throw ValidationError("unknown model kind '" + std::string(name) +
                        "' (valid: full, phase, offdiag, custom)");
}

Matrix generator_gram(const std::vector<Matrix>& generators) {
  const auto m = static_cast<Eigen::Index>(generators.size());
  Matrix gram(m, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index k = 0; k < m; ++k) {
      gram(j, k) = hs_inner(generators[static_cast<std::size_t>(j)],
                            generators[static_cast<std::size_t>(k)]);
    }
  }
  return gram;
}

namespace {

void validate_generators(int d, const std::vector<Matrix>& generators) {
  if (generators.empty()) throw ValidationError("model: generator list is empty");
  for (std::size_t j = 0; j < generators.size(); ++j) {
    const Matrix& x = generators[j];
    if (x.rows() != d || x.cols() != d) {
      std::ostringstream msg;
      msg << "model: generator " << j << " has shape " << x.rows() << "x" << x.cols()
          << ", expected " << d << "x" << d;
      throw ValidationError(msg.str());
    }
    require_hermitian(x, "model generator");
    if (std::abs(x.trace()) > kTol.generator_traceless) {
      std::ostringstream msg;
      msg << "model: generator " << j << " is not traceless (Tr = " << x.trace() << ")";
      throw ValidationError(msg.str());
    }
  }
  const Matrix gram = generator_gram(generators);
  const auto m = gram.rows();
  std::ostringstream bad;
  int n_bad = 0;
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index k = 0; k < m; ++k) {
      const Complex expected = (j == k) ? 1.0 : 0.0;
      if (std::abs(gram(j, k) - expected) > kTol.gram) {
        bad << " (" << j << "," << k << ")=" << gram(j, k);
        ++n_bad;
      }
    }
  }
  if (n_bad > 0) {
    throw ValidationError("model: generators are not orthonormal; offending Gram entries:" +
                          bad.str());
  }
}

// Orthonormal diagonal traceless generators by Gram-Schmidt over the
// adjacent-difference patterns |e_j><e_j| - |e_{j+1}><e_{j+1}|.
std::vector<Matrix> phase_generators(int d) {
  std::vector<Matrix> out;
  for (int j = 0; j + 1 < d; ++j) {
    Matrix x = Matrix::Zero(d, d);
    x(j, j) = 1.0;
    x(j + 1, j + 1) = -1.0;
    for (const Matrix& prev : out) x -= hs_inner(prev, x) * prev;
    x /= hs_norm(x);
    out.push_back(std::move(x));
  }
  return out;
}

std::vector<Matrix> offdiag_generators(int d) {
  std::vector<Matrix> out;
  const double s = 1.0 / std::sqrt(2.0);
  for (int j = 0; j + 1 < d; ++j) {
    Matrix x = Matrix::Zero(d, d);
    x(j, d - 1) = s;
    x(d - 1, j) = s;
    out.push_back(std::move(x));
  }
  return out;
}

}  // namespace

HamiltonianModel::HamiltonianModel(ModelKind kind, int d, std::vector<Matrix> generators)
    : kind_(kind), d_(d), generators_(std::move(generators)) {
  if (d < 2) throw ValidationError("model: dimension d must be at least 2");
  validate_generators(d_, generators_);
  big_x_ = Matrix::Zero(d_, d_);
  for (const Matrix& x : generators_) big_x_ += x * x;
  big_x_ = (big_x_ + big_x_.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<Matrix> es(big_x_, Eigen::EigenvaluesOnly);
  c_ = es.eigenvalues().cwiseAbs().maxCoeff();
  const Matrix ideal = (static_cast<double>(m()) / d_) * Matrix::Identity(d_, d_);
  spherical_ = max_abs(big_x_ - ideal) <= kTol.sphericity;
}

HamiltonianModel make_model(ModelKind kind, int d,
                            const std::optional<std::vector<Matrix>>& custom_generators) {
  if (d < 2) throw ValidationError("make_model: dimension d must be at least 2");
  switch (kind) {
    case ModelKind::full: return HamiltonianModel(kind, d, su_basis(d));
    case ModelKind::phase: return HamiltonianModel(kind, d, phase_generators(d));
    case ModelKind::offdiag: return HamiltonianModel(kind, d, offdiag_generators(d));
    case ModelKind::custom:
      if (!custom_generators) throw ValidationError("make_model: custom kind needs generators");
      return HamiltonianModel(kind, d, *custom_generators);
  }
  throw ValidationError("make_model: unknown kind");
}

Matrix hamiltonian(const HamiltonianModel& model, const RealVector& theta) {
  if (theta.size() != model.m()) {
    std::ostringstream msg;
    msg << "hamiltonian: theta has length " << theta.size() << ", model has m = " << model.m();
    throw ValidationError(msg.str());
  }
  Matrix h = Matrix::Zero(model.d(), model.d());
  for (int j = 0; j < model.m(); ++j) h += theta(j) * model.generator(j);
  return h;
}

double max_energy(const HamiltonianModel& model, double radius) {
  if (radius < 0.0) throw ValidationError("max_energy: radius must be nonnegative");
  return radius * std::sqrt(model.c());
}

}  // namespace hamest
