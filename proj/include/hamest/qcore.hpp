#pragma once

// Dense complex linear algebra on small Hermitian and unitary matrices.
//
// All functions are templated on the Eigen expression type, so they accept
// plain matrices, blocks and expressions of any complex scalar. Results are
// returned as the corresponding plain object type.

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include <Eigen/Eigenvalues>

#include "hamest/types.hpp"

namespace hamest {

template <typename Derived>
using PlainOf = typename Derived::PlainObject;

template <typename Derived>
using RealOf = typename Eigen::NumTraits<typename Derived::Scalar>::Real;

template <typename Derived>
RealOf<Derived> max_abs(const Eigen::MatrixBase<Derived>& a) {
  if (a.size() == 0) return RealOf<Derived>(0);
  return a.cwiseAbs().maxCoeff();
}

template <typename Derived>
RealOf<Derived> hermiticity_defect(const Eigen::MatrixBase<Derived>& a) {
  return max_abs(a - a.adjoint());
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& a, double tol = kTol.hermitian) {
  if (a.rows() != a.cols()) return false;
  const double scale = std::max(1.0, static_cast<double>(max_abs(a)));
  return hermiticity_defect(a) <= tol * scale;
}

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    std::ostringstream msg;
    msg << what << ": expected a non-empty square matrix, got " << a.rows() << "x" << a.cols();
    throw ValidationError(msg.str());
  }
}

template <typename Derived>
void require_hermitian(const Eigen::MatrixBase<Derived>& a, const char* what,
                       double tol = kTol.hermitian) {
  require_square(a, what);
  if (!is_hermitian(a, tol)) {
    std::ostringstream msg;
    msg << what << ": matrix is not Hermitian (max |A - A^H| = " << hermiticity_defect(a) << ")";
    throw ValidationError(msg.str());
  }
}

template <typename Derived>
RealOf<Derived> unitarity_defect(const Eigen::MatrixBase<Derived>& u) {
  using Plain = PlainOf<Derived>;
  return max_abs(u.adjoint() * u - Plain::Identity(u.rows(), u.cols()));
}

template <typename Derived>
bool is_unitary(const Eigen::MatrixBase<Derived>& u, double tol = kTol.unitary) {
  return u.rows() == u.cols() && unitarity_defect(u) <= tol;
}

/// e^{-i t H} through the spectral decomposition of H.
template <typename Derived>
PlainOf<Derived> hermitian_expm(const Eigen::MatrixBase<Derived>& h, RealOf<Derived> t) {
  using Plain = PlainOf<Derived>;
  using Scalar = typename Derived::Scalar;
  require_hermitian(h, "hermitian_expm");
  const Eigen::Index n = h.rows();
  if (t == RealOf<Derived>(0)) return Plain::Identity(n, n);
  Plain hs = (h + h.adjoint()) * Scalar(0.5);
  Eigen::SelfAdjointEigenSolver<Plain> es(hs);
  const auto& vecs = es.eigenvectors();
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> phases(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    phases(k) = std::polar(RealOf<Derived>(1), -t * es.eigenvalues()(k));
  }
  return vecs * phases.asDiagonal() * vecs.adjoint();
}

/// Hermitian M with e^{-iM} = U and spectrum in (-pi, pi].
///
/// Uses the complex Schur form, which is diagonal for a normal matrix, so the
/// eigenbasis stays unitary even for degenerate eigenphases.
template <typename Derived>
PlainOf<Derived> unitary_principal_log(const Eigen::MatrixBase<Derived>& u) {
  using Plain = PlainOf<Derived>;
  using Real = RealOf<Derived>;
  using Scalar = typename Derived::Scalar;
  require_square(u, "unitary_principal_log");
  if (!is_unitary(u)) {
    std::ostringstream msg;
    msg << "unitary_principal_log: input is not unitary (max |U^H U - I| = " << unitarity_defect(u)
        << ")";
    throw ValidationError(msg.str());
  }
  const Eigen::Index n = u.rows();
  Eigen::ComplexSchur<Plain> schur(u.eval());
  const Plain& q = schur.matrixU();
  const Plain& tri = schur.matrixT();
  Eigen::Matrix<Real, Eigen::Dynamic, 1> generator_phases(n);
  const Real pi = std::numbers::pi_v<Real>;
  for (Eigen::Index k = 0; k < n; ++k) {
    const Real arg = std::arg(tri(k, k));
    if (pi - std::abs(arg) < Real(kTol.branch_cut)) {
      std::ostringstream msg;
      msg << "unitary_principal_log: eigenphase " << arg
          << " lies on the branch cut at -pi; logarithm is ambiguous";
      throw BranchCutError(msg.str());
    }
    generator_phases(k) = -arg;
  }
  Plain m = q * generator_phases.template cast<Scalar>().asDiagonal() * q.adjoint();
  return (m + m.adjoint()) * Scalar(0.5);
}

/// Tr(A^H B).
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar hs_inner(const Eigen::MatrixBase<DerivedA>& a,
                                   const Eigen::MatrixBase<DerivedB>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    std::ostringstream msg;
    msg << "hs_inner: dimension mismatch " << a.rows() << "x" << a.cols() << " vs " << b.rows()
        << "x" << b.cols();
    throw ValidationError(msg.str());
  }
  return (a.conjugate().cwiseProduct(b)).sum();
}

template <typename Derived>
RealOf<Derived> hs_norm(const Eigen::MatrixBase<Derived>& a) {
  return a.norm();
}

/// Largest singular value.
template <typename Derived>
RealOf<Derived> operator_norm(const Eigen::MatrixBase<Derived>& a) {
  using Plain = PlainOf<Derived>;
  if (a.size() == 0) return RealOf<Derived>(0);
  Eigen::JacobiSVD<Plain> svd(a.eval());
  return svd.singularValues()(0);
}

template <typename DerivedA, typename DerivedB>
PlainOf<DerivedA> kron(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  PlainOf<DerivedA> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// Orthonormal traceless Hermitian basis of su(d) (generalized Gell-Mann):
/// symmetric pairs, antisymmetric pairs, then the diagonal ladder, each with
/// Tr X_j X_k = delta_jk. For d = 2 this is (sigma_x, sigma_y, sigma_z)/sqrt(2).
template <typename Scalar = Complex>
std::vector<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> su_basis(int d) {
  using Plain = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  if (d < 2) throw ValidationError("su_basis: dimension must be at least 2");
  const Real inv_sqrt2 = Real(1) / std::sqrt(Real(2));
  std::vector<Plain> basis;
  basis.reserve(static_cast<std::size_t>(d * d - 1));
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      Plain sym = Plain::Zero(d, d);
      sym(j, k) = sym(k, j) = Scalar(inv_sqrt2);
      basis.push_back(std::move(sym));
      Plain anti = Plain::Zero(d, d);
      anti(j, k) = Scalar(0, -inv_sqrt2);
      anti(k, j) = Scalar(0, inv_sqrt2);
      basis.push_back(std::move(anti));
    }
  }
  for (int l = 1; l < d; ++l) {
    Plain diag = Plain::Zero(d, d);
    const Real norm = std::sqrt(Real(l) * Real(l + 1));
    for (int j = 0; j < l; ++j) diag(j, j) = Scalar(Real(1) / norm);
    diag(l, l) = Scalar(-Real(l) / norm);
    basis.push_back(std::move(diag));
  }
  return basis;
}

/// Haar-distributed unitary from the QR decomposition of a Ginibre matrix,
/// with the diagonal phases of R folded back into Q.
template <typename Generator>
Matrix haar_unitary(int n, Generator& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(n, n);
  for (Eigen::Index j = 0; j < g.cols(); ++j) {
    for (Eigen::Index i = 0; i < g.rows(); ++i) g(i, j) = Complex(normal(rng), normal(rng));
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix& r = qr.matrixQR();
  for (Eigen::Index k = 0; k < n; ++k) {
    const double mag = std::abs(r(k, k));
    if (mag > 0.0) q.col(k) *= r(k, k) / mag;
  }
  return q;
}

/// Random Hermitian matrix with i.i.d. Gaussian entries (GUE up to scale).
template <typename Generator>
Matrix random_hermitian(int n, Generator& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(n, n);
  for (Eigen::Index j = 0; j < g.cols(); ++j) {
    for (Eigen::Index i = 0; i < g.rows(); ++i) g(i, j) = Complex(normal(rng), normal(rng));
  }
  return (g + g.adjoint()) * 0.5;
}

template <typename Generator>
Matrix random_traceless_hermitian(int n, Generator& rng) {
  Matrix h = random_hermitian(n, rng);
  h -= (h.trace() / double(n)) * Matrix::Identity(n, n);
  return h;
}

}  // namespace hamest
