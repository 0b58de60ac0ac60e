#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hamest/types.hpp"

namespace hamest {

enum class ModelKind { full, phase, offdiag, custom };

std::string_view to_string(ModelKind kind);
/// Parses the canonical names `full`, `phase`, `offdiag`, `custom`.
ModelKind parse_model_kind(std::string_view name);

/// Linear Hamiltonian family H_theta = sum_j theta_j X_j over an orthonormal,
/// traceless generator set. Immutable after construction.
class HamiltonianModel {
 public:
  HamiltonianModel(ModelKind kind, int d, std::vector<Matrix> generators);

  ModelKind kind() const { return kind_; }
  int d() const { return d_; }
  int m() const { return static_cast<int>(generators_.size()); }
  const std::vector<Matrix>& generators() const { return generators_; }
  const Matrix& generator(int j) const { return generators_.at(static_cast<std::size_t>(j)); }
  /// Sum of squared generators.
  const Matrix& big_x() const { return big_x_; }
  /// Operator norm of big_x().
  double c() const { return c_; }
  bool spherical() const { return spherical_; }

 private:
  ModelKind kind_;
  int d_;
  std::vector<Matrix> generators_;
  Matrix big_x_;
  double c_ = 0.0;
  bool spherical_ = false;
};

HamiltonianModel make_model(ModelKind kind, int d,
                            const std::optional<std::vector<Matrix>>& custom_generators = {});

/// Gram matrix Tr(X_j^H X_k) of a generator list.
Matrix generator_gram(const std::vector<Matrix>& generators);

Matrix hamiltonian(const HamiltonianModel& model, const RealVector& theta);

/// Upper bound E sqrt(c) on ||H_theta|| over the ball ||theta|| <= E.
double max_energy(const HamiltonianModel& model, double radius);

}  // namespace hamest
