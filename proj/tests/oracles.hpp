#pragma once

// Brute-force references that share no code with the library: explicit
// permutation operators, a hand-rolled Kronecker product, and Eigen's own
// Pade-based matrix exponential.

#include <algorithm>
#include <complex>
#include <numeric>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

namespace oracle {

using Matrix = Eigen::MatrixXcd;
using Complex = std::complex<double>;

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out = Matrix::Zero(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index k = 0; k < b.rows(); ++k)
        for (Eigen::Index l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

/// e^{-i t H} by Eigen's scaling-and-squaring Pade exponential.
inline Matrix expm(const Matrix& h, double t) {
  const Matrix a = Complex(0.0, -t) * h;
  return a.exp();
}

inline long ipow(long b, int e) {
  long out = 1;
  while (e-- > 0) out *= b;
  return out;
}

/// Operator permuting the r tensor slots: output slot s carries input slot perm[s].
inline Matrix permutation_operator(int d, const std::vector<int>& perm) {
  const int r = static_cast<int>(perm.size());
  const long n = ipow(d, r);
  Matrix p = Matrix::Zero(n, n);
  std::vector<int> in(r), out(r);
  for (long idx = 0; idx < n; ++idx) {
    long rem = idx;
    for (int s = r - 1; s >= 0; --s) {
      in[s] = static_cast<int>(rem % d);
      rem /= d;
    }
    for (int s = 0; s < r; ++s) out[s] = in[perm[s]];
    long o = 0;
    for (int s = 0; s < r; ++s) o = o * d + out[s];
    p(o, idx) = 1.0;
  }
  return p;
}

/// Symmetrizer (1/r!) sum over all permutations.
inline Matrix symmetrizer(int d, int r) {
  std::vector<int> perm(r);
  std::iota(perm.begin(), perm.end(), 0);
  const long n = ipow(d, r);
  Matrix sum = Matrix::Zero(n, n);
  long count = 0;
  do {
    sum += permutation_operator(d, perm);
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return sum / static_cast<double>(count);
}

/// Sum over slots of A acting on one slot of (C^d)^{(x) r}.
inline Matrix slot_sum(const Matrix& a, int r) {
  const long d = a.rows();
  Matrix out = Matrix::Zero(ipow(d, r), ipow(d, r));
  for (int s = 0; s < r; ++s) {
    Matrix term = Matrix::Identity(1, 1);
    for (int t = 0; t < r; ++t) term = kron(term, t == s ? a : Matrix::Identity(d, d));
    out += term;
  }
  return out;
}

/// Orthonormal basis of the range of the symmetrizer.
inline Matrix symmetric_basis(int d, int r) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrizer(d, r));
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k)
    if (es.eigenvalues()(k) > 0.5) keep.push_back(k);
  Matrix b(es.eigenvectors().rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) b.col(k) = es.eigenvectors().col(keep[k]);
  return b;
}

/// Normalized trace moments Tr(C^k)/D of the collective operator, basis free.
inline std::pair<double, double> collective_moments(const Matrix& x, int r) {
  const Matrix b = symmetric_basis(static_cast<int>(x.rows()), r);
  const Matrix c = b.adjoint() * slot_sum(x, r) * b;
  const Matrix c2 = c * c;
  const double dim = static_cast<double>(b.cols());
  return {c2.trace().real() / dim, (c2 * c2).trace().real() / dim};
}

}  // namespace oracle
