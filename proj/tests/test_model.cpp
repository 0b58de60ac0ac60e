#include <gtest/gtest.h>

#include "hamest/model.hpp"
#include "hamest/qcore.hpp"

using namespace hamest;

TEST(Model, FullModelCounts) {
  for (int d = 2; d <= 4; ++d) {
    const HamiltonianModel m = make_model(ModelKind::full, d);
    EXPECT_EQ(m.m(), d * d - 1);
    EXPECT_TRUE(m.spherical());
    EXPECT_NEAR(m.c(), static_cast<double>(d * d - 1) / d, 1e-12);
  }
}

TEST(Model, PhaseModelIsDiagonalAndSpherical) {
  const HamiltonianModel m = make_model(ModelKind::phase, 3);
  EXPECT_EQ(m.m(), 2);
  for (const Matrix& x : m.generators()) {
    EXPECT_LT(max_abs(Matrix(x.diagonal().asDiagonal()) - x), 1e-15);
  }
  EXPECT_TRUE(m.spherical());
  EXPECT_NEAR(m.c(), 2.0 / 3.0, 1e-12);
}

TEST(Model, OffdiagModelIsNotSpherical) {
  const HamiltonianModel m = make_model(ModelKind::offdiag, 3);
  EXPECT_EQ(m.m(), 2);
  EXPECT_FALSE(m.spherical());
  // X = sum_j X_j^2 = diag(1/2, 1/2, 1) -> c = 1.
  EXPECT_NEAR(m.c(), 1.0, 1e-12);
  const HamiltonianModel m2 = make_model(ModelKind::offdiag, 2);
  EXPECT_NEAR(m2.c(), 0.5, 1e-12);
}

TEST(Model, CustomValidation) {
  Matrix x = Matrix::Zero(2, 2);
  x(0, 0) = 1.0;
  EXPECT_THROW(make_model(ModelKind::custom, 2, std::vector<Matrix>{x}), ValidationError);
  Matrix y = Matrix::Zero(2, 2);
  y(0, 1) = y(1, 0) = 1.0;  // norm sqrt 2, not orthonormal
  EXPECT_THROW(make_model(ModelKind::custom, 2, std::vector<Matrix>{y}), ValidationError);
  y /= std::sqrt(2.0);
  EXPECT_NO_THROW(make_model(ModelKind::custom, 2, std::vector<Matrix>{y}));
  EXPECT_THROW(make_model(ModelKind::custom, 2), ValidationError);
}

TEST(Model, HamiltonianIsLinear) {
  const HamiltonianModel m = make_model(ModelKind::full, 2);
  RealVector a(3), b(3);
  a << 0.1, -0.2, 0.3;
  b << 0.5, 0.0, -1.0;
  EXPECT_LT(max_abs(hamiltonian(m, a + 2.0 * b) - hamiltonian(m, a) - 2.0 * hamiltonian(m, b)),
            1e-15);
  EXPECT_THROW(hamiltonian(m, RealVector::Zero(2)), ValidationError);
}

TEST(Model, MaxEnergyBoundsNorm) {
  Rng rng(3);
  for (ModelKind k : {ModelKind::full, ModelKind::phase, ModelKind::offdiag}) {
    const HamiltonianModel m = make_model(k, 3);
    for (int i = 0; i < 50; ++i) {
      RealVector t(m.m());
      std::normal_distribution<double> n;
      for (int j = 0; j < m.m(); ++j) t(j) = n(rng);
      t.normalize();
      EXPECT_LE(operator_norm(hamiltonian(m, t)), max_energy(m, 1.0) * (1 + 1e-12));
    }
  }
}

TEST(Model, ParseNames) {
  EXPECT_EQ(parse_model_kind("offdiag"), ModelKind::offdiag);
  EXPECT_EQ(to_string(ModelKind::phase), "phase");
  try {
    parse_model_kind("bogus");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("full"), std::string::npos);
  }
}
