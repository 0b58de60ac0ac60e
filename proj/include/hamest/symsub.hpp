#pragma once

#include <map>
#include <optional>
#include <vector>

#include "hamest/types.hpp"

namespace hamest {

/// Largest tensor space (d^r amplitudes) for which the explicit isometry is built.
inline constexpr long kTensorBudget = 4096;
/// Largest symmetric-subspace dimension D handled in the occupation basis.
inline constexpr long kSymmetricBudget = 4096;

/// r-fold symmetric subspace of C^d in the occupation-number basis.
///
/// Basis states are ordered by descending occupation of the first mode, then
/// the second, and so on: for d = 2, r = 2 the order is (2,0), (1,1), (0,2).
/// The explicit isometry into the r-fold tensor space is only available when
/// d^r <= kTensorBudget.
class SymSpace {
 public:
  int d() const { return d_; }
  int r() const { return r_; }
  /// D = (r+d-1)! / (r! (d-1)!).
  int dim() const { return static_cast<int>(occupations_.size()); }
  const std::vector<std::vector<int>>& occupations() const { return occupations_; }
  int index_of(const std::vector<int>& occupation) const;

  bool has_isometry() const { return isometry_.has_value(); }
  /// d^r x D matrix with orthonormal columns; throws ResourceError when absent.
  const Matrix& isometry() const;

 private:
  friend SymSpace sym_space(int d, int r);
  friend SymSpace occupation_space(int d, int r);
  SymSpace(int d, int r, bool with_isometry);

  int d_;
  int r_;
  std::vector<std::vector<int>> occupations_;
  std::map<std::vector<int>, int> index_;
  std::optional<Matrix> isometry_;
};

/// Symmetric dimension from the closed form.
long symmetric_dimension(int d, int r);

/// Full space including the tensor-space isometry (guard d^r <= 4096).
SymSpace sym_space(int d, int r);
/// Occupation-basis space only (guard D <= 4096); no tensor embedding.
SymSpace occupation_space(int d, int r);

/// {A}_r = P sum_j A^(j) restricted to the symmetric subspace, computed from
/// second-quantized matrix elements sum_ab A_ab a_a^dag a_b.
Matrix collective(const SymSpace& space, const Matrix& a);

/// Same operator through the isometry: V^H (sum_j A^(j)) V.
Matrix collective_via_isometry(const SymSpace& space, const Matrix& a);

/// Tensor-power action U^{(x) r} restricted by the isometry: V^H U^{(x)r} V.
Matrix restricted_tensor_power(const SymSpace& space, const Matrix& u);

double collective_f2(int d, int r);
double collective_f4(int d, int r);
double collective_f22(int d, int r);

struct TraceMoments {
  double m2_actual = 0.0;
  double m2_predicted = 0.0;
  double m4_actual = 0.0;
  double m4_predicted = 0.0;
  double f2 = 0.0;
  double f4 = 0.0;
  double f22 = 0.0;
};

TraceMoments collective_trace_moments(const SymSpace& space, const Matrix& x);

/// Hermitian M with e^{-i tau M} = e^{i tau H*} e^{-i tau H_theta}.
Matrix magnus_operator(const Matrix& h_star, const Matrix& h_theta, double tau);

}  // namespace hamest
