#include <gtest/gtest.h>

#include "hamest/qcore.hpp"
#include "hamest/symsub.hpp"
#include "oracles.hpp"

using namespace hamest;

namespace {
Matrix pauli_z_scaled() {
  Matrix z = Matrix::Zero(2, 2);
  z(0, 0) = 1.0 / std::sqrt(2.0);
  z(1, 1) = -1.0 / std::sqrt(2.0);
  return z;
}
}  // namespace

TEST(Symsub, Dimensions) {
  EXPECT_EQ(sym_space(2, 2).dim(), 3);
  EXPECT_EQ(sym_space(3, 2).dim(), 6);
  EXPECT_EQ(sym_space(2, 4).dim(), 5);
  EXPECT_EQ(symmetric_dimension(4, 3), 20);
  EXPECT_EQ(occupation_space(2, 64).dim(), 65);
  EXPECT_EQ(occupation_space(3, 20).dim(), symmetric_dimension(3, 20));
}

TEST(Symsub, IsometryOrthonormalAndSpansSymmetricSubspace) {
  for (int d : {2, 3}) {
    for (int r = 1; r <= 4; ++r) {
      const SymSpace s = sym_space(d, r);
      const Matrix& v = s.isometry();
      EXPECT_LT(max_abs(v.adjoint() * v - Matrix::Identity(s.dim(), s.dim())), 1e-12);
      // V V^H equals the brute-force symmetrizer.
      EXPECT_LT(max_abs(v * v.adjoint() - oracle::symmetrizer(d, r)), 1e-12);
    }
  }
}

TEST(Symsub, OccupationOrdering) {
  const SymSpace s = sym_space(2, 2);
  EXPECT_EQ(s.occupations()[0], (std::vector<int>{2, 0}));
  EXPECT_EQ(s.occupations()[1], (std::vector<int>{1, 1}));
  EXPECT_EQ(s.occupations()[2], (std::vector<int>{0, 2}));
  EXPECT_EQ(s.index_of({1, 1}), 1);
  EXPECT_THROW(s.index_of({3, 0}), ValidationError);
}

TEST(Symsub, Guards) {
  EXPECT_THROW(sym_space(2, 13), ResourceError);  // 8192 amplitudes
  EXPECT_NO_THROW(sym_space(2, 12));
  EXPECT_THROW(occupation_space(2, 13).isometry(), ResourceError);
  EXPECT_THROW(occupation_space(64, 3), ResourceError);  // D = 45760
  EXPECT_THROW(sym_space(1, 2), ValidationError);
  EXPECT_THROW(sym_space(2, 0), ValidationError);
}

TEST(Symsub, CollectiveWorkedExample) {
  const Matrix c = collective(sym_space(2, 2), pauli_z_scaled());
  Matrix want = Matrix::Zero(3, 3);
  want(0, 0) = std::sqrt(2.0);
  want(2, 2) = -std::sqrt(2.0);
  EXPECT_LT(max_abs(c - want), 1e-12);
}

TEST(Symsub, CollectiveOfIdentityAndLinearity) {
  Rng rng(1);
  const SymSpace s = occupation_space(3, 5);
  EXPECT_LT(max_abs(collective(s, Matrix::Identity(3, 3)) - 5.0 * Matrix::Identity(s.dim(), s.dim())),
            1e-12);
  const Matrix a = random_hermitian(3, rng), b = random_hermitian(3, rng);
  EXPECT_LT(max_abs(collective(s, a + b) - collective(s, a) - collective(s, b)), 1e-12);
  EXPECT_TRUE(is_hermitian(collective(s, a)));
  EXPECT_THROW(collective(s, Matrix::Identity(2, 2)), ValidationError);
}

TEST(Symsub, BothRoutesMatchBruteForce) {
  Rng rng(2);
  for (int d : {2, 3}) {
    for (int r = 1; r <= 4; ++r) {
      const SymSpace s = sym_space(d, r);
      const Matrix a = random_hermitian(d, rng);
      const Matrix& v = s.isometry();
      const Matrix brute = v.adjoint() * oracle::slot_sum(a, r) * v;
      EXPECT_LT(max_abs(collective_via_isometry(s, a) - brute), 1e-12);
      EXPECT_LT(max_abs(collective(s, a) - brute), 1e-12);
    }
  }
}

TEST(Symsub, TraceMomentClosedFormsAgainstSymmetrizer) {
  Rng rng(3);
  for (int d : {2, 3}) {
    for (int r = 1; r <= 4; ++r) {
      const SymSpace s = occupation_space(d, r);
      for (int i = 0; i < 10; ++i) {
        const Matrix x = random_traceless_hermitian(d, rng);
        const auto [m2, m4] = oracle::collective_moments(x, r);
        const TraceMoments t = collective_trace_moments(s, x);
        EXPECT_NEAR(t.m2_actual, m2, 1e-9 * std::max(1.0, m2));
        EXPECT_NEAR(t.m2_predicted, m2, 1e-9 * std::max(1.0, m2));
        EXPECT_NEAR(t.m4_actual, m4, 1e-9 * std::max(1.0, m4));
        EXPECT_NEAR(t.m4_predicted, m4, 1e-9 * std::max(1.0, m4));
      }
    }
  }
}

TEST(Symsub, FrozenCoefficients) {
  // Hand arithmetic of the closed forms.
  EXPECT_NEAR(collective_f2(2, 2), 4.0 / 3.0, 1e-15);
  EXPECT_NEAR(collective_f4(2, 2), 10.0 / 3.0, 1e-15);
  EXPECT_NEAR(collective_f22(2, 2), 1.0, 1e-15);
  EXPECT_NEAR(collective_f2(3, 4), 7.0 / 3.0, 1e-15);
  EXPECT_NEAR(collective_f4(3, 4), 28.0 * 174.0 / 360.0, 1e-13);
  EXPECT_NEAR(collective_f22(3, 4), 5.6, 1e-13);
  for (int d : {2, 5}) {
    // One channel: normalized moments are Tr X^k / d.
    EXPECT_NEAR(collective_f2(d, 1), 1.0 / d, 1e-15);
    EXPECT_NEAR(collective_f4(d, 1), 1.0 / d, 1e-15);
    EXPECT_EQ(collective_f22(d, 1), 0.0);
  }
}

TEST(Symsub, WorkedMoments) {
  const TraceMoments t = collective_trace_moments(sym_space(2, 2), pauli_z_scaled());
  EXPECT_NEAR(t.m2_actual, 4.0 / 3.0, 1e-12);
  EXPECT_NEAR(t.m2_predicted, 4.0 / 3.0, 1e-12);
  EXPECT_NEAR(t.m4_actual, 8.0 / 3.0, 1e-12);
  EXPECT_NEAR(t.m4_predicted, 8.0 / 3.0, 1e-12);
  EXPECT_THROW(collective_trace_moments(sym_space(2, 2), Matrix::Identity(2, 2)), ValidationError);
}

TEST(Symsub, HsScalingAndCrossOrthogonality) {
  const auto basis = su_basis(3);
  for (int r : {2, 5, 9}) {
    const SymSpace s = occupation_space(3, r);
    const double f2 = collective_f2(3, r);
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const Matrix cj = collective(s, basis[j]);
      EXPECT_NEAR(cj.squaredNorm(), s.dim() * f2, 1e-9 * s.dim() * f2);
      for (std::size_t k = j + 1; k < basis.size(); ++k) {
        EXPECT_NEAR(std::abs(hs_inner(cj, collective(s, basis[k]))) / s.dim(), 0.0, 1e-9);
      }
    }
  }
}

TEST(Symsub, RestrictionIdentity) {
  Rng rng(4);
  for (int d : {2, 3}) {
    for (int r = 1; r <= 4; ++r) {
      const SymSpace s = sym_space(d, r);
      const Matrix h = random_hermitian(d, rng);
      Matrix tensor = Matrix::Identity(1, 1);
      for (int i = 0; i < r; ++i) tensor = oracle::kron(tensor, oracle::expm(h, 0.6));
      const Matrix want = s.isometry().adjoint() * tensor * s.isometry();
      EXPECT_LT(max_abs(hermitian_expm(collective(s, h), 0.6) - want), 1e-9);
      EXPECT_LT(max_abs(restricted_tensor_power(s, oracle::expm(h, 0.6)) - want), 1e-12);
    }
  }
}

TEST(Symsub, MagnusOperator) {
  Rng rng(5);
  const Matrix h = random_hermitian(3, rng) * 0.3;
  EXPECT_LT(max_abs(magnus_operator(h, h, 0.5)), 1e-12);

  Matrix a = Matrix::Zero(2, 2), b = Matrix::Zero(2, 2);
  a(0, 0) = 0.4;
  a(1, 1) = -0.1;
  b(0, 0) = -0.3;
  b(1, 1) = 0.2;
  EXPECT_LT(max_abs(magnus_operator(a, b, 0.7) - (b - a)), 1e-12);

  for (int i = 0; i < 50; ++i) {
    Matrix hs = random_hermitian(2, rng), ht = random_hermitian(2, rng);
    const double tau = 0.2 / std::max(operator_norm(hs), operator_norm(ht));
    const Matrix m = magnus_operator(hs, ht, tau);
    EXPECT_LT(max_abs(hermitian_expm(m, tau) - hermitian_expm(hs, -tau) * hermitian_expm(ht, tau)),
              1e-9);
    EXPECT_LE(hs_norm(m - (ht - hs)), 2.0 * tau * hs_norm(hs) * hs_norm(ht - hs) + 1e-12);
  }
  EXPECT_THROW(magnus_operator(a, b, 0.0), ValidationError);
  EXPECT_THROW(magnus_operator(a * 10, b * 10, 1.0), ValidationError);
}
