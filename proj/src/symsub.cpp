#include "hamest/symsub.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "hamest/probe.hpp"
#include "hamest/qcore.hpp"

namespace hamest {

namespace {

void enumerate_occupations(int modes_left, int particles, std::vector<int>& current,
                           std::vector<std::vector<int>>& out) {
  if (modes_left == 1) {
    current.push_back(particles);
    out.push_back(current);
    current.pop_back();
    return;
  }
  for (int n = particles; n >= 0; --n) {
    current.push_back(n);
    enumerate_occupations(modes_left - 1, particles - n, current, out);
    current.pop_back();
  }
}

double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

bool tensor_fits(int d, int r) {
  long total = 1;
  for (int i = 0; i < r; ++i) {
    total *= d;
    if (total > kTensorBudget) return false;
  }
  return true;
}

void require_dim(const SymSpace& space, const Matrix& a, const char* what) {
  if (a.rows() != space.d() || a.cols() != space.d()) {
    std::ostringstream msg;
    msg << what << ": operator is " << a.rows() << "x" << a.cols() << ", expected " << space.d()
        << "x" << space.d();
    throw ValidationError(msg.str());
  }
}

}  // namespace

long symmetric_dimension(int d, int r) {
  // C(r + d - 1, d - 1) computed incrementally; exact for the sizes used here.
  long value = 1;
  for (int k = 1; k < d; ++k) value = value * (r + k) / k;
  return value;
}

SymSpace::SymSpace(int d, int r, bool with_isometry) : d_(d), r_(r) {
  if (d < 2) throw ValidationError("SymSpace: d must be at least 2");
  if (r < 1) throw ValidationError("SymSpace: r must be at least 1");
  if (with_isometry && !tensor_fits(d, r)) {
    std::ostringstream msg;
    msg << "SymSpace: tensor space d^r = " << d << "^" << r << " exceeds the budget of "
        << kTensorBudget << " amplitudes";
    throw ResourceError(msg.str());
  }
  if (symmetric_dimension(d, r) > kSymmetricBudget) {
    std::ostringstream msg;
    msg << "SymSpace: symmetric dimension " << symmetric_dimension(d, r) << " exceeds the budget of "
        << kSymmetricBudget;
    throw ResourceError(msg.str());
  }
  std::vector<int> current;
  enumerate_occupations(d, r, current, occupations_);
  for (std::size_t i = 0; i < occupations_.size(); ++i) {
    index_.emplace(occupations_[i], static_cast<int>(i));
  }
  if (!with_isometry) return;

  long tensor_dim = 1;
  for (int i = 0; i < r; ++i) tensor_dim *= d;
  Matrix v = Matrix::Zero(tensor_dim, dim());
  std::vector<int> occ(static_cast<std::size_t>(d));
  for (long idx = 0; idx < tensor_dim; ++idx) {
    std::fill(occ.begin(), occ.end(), 0);
    long rem = idx;
    for (int s = 0; s < r; ++s) {
      ++occ[static_cast<std::size_t>(rem % d)];
      rem /= d;
    }
    double log_multinomial = log_factorial(r);
    for (int n : occ) log_multinomial -= log_factorial(n);
    v(idx, index_of(occ)) = std::exp(-0.5 * log_multinomial);
  }
  isometry_ = std::move(v);
}

int SymSpace::index_of(const std::vector<int>& occupation) const {
  const auto it = index_.find(occupation);
  if (it == index_.end()) throw ValidationError("SymSpace: occupation not in basis");
  return it->second;
}

const Matrix& SymSpace::isometry() const {
  if (!isometry_) {
    throw ResourceError("SymSpace: isometry not available (tensor space exceeds budget)");
  }
  return *isometry_;
}

SymSpace sym_space(int d, int r) { return SymSpace(d, r, true); }

SymSpace occupation_space(int d, int r) { return SymSpace(d, r, false); }

Matrix collective(const SymSpace& space, const Matrix& a) {
  require_dim(space, a, "collective");
  const int d = space.d();
  const int dim = space.dim();
  Matrix out = Matrix::Zero(dim, dim);
  std::vector<int> target;
  for (int col = 0; col < dim; ++col) {
    const auto& occ = space.occupations()[static_cast<std::size_t>(col)];
    for (int b = 0; b < d; ++b) {
      const int nb = occ[static_cast<std::size_t>(b)];
      if (nb == 0) continue;
      out(col, col) += a(b, b) * static_cast<double>(nb);
      for (int x = 0; x < d; ++x) {
        if (x == b || a(x, b) == Complex(0.0)) continue;
        target = occ;
        --target[static_cast<std::size_t>(b)];
        const int nx = ++target[static_cast<std::size_t>(x)];
        out(space.index_of(target), col) += a(x, b) * std::sqrt(static_cast<double>(nb) * nx);
      }
    }
  }
  return out;
}

namespace {

Matrix apply_slotwise(const SymSpace& space, const Matrix& v, const Matrix& a, bool sum) {
  const std::vector<int> factors(static_cast<std::size_t>(space.r()), space.d());
  Matrix out = sum ? Matrix::Zero(v.rows(), v.cols()) : v;
  for (Eigen::Index col = 0; col < v.cols(); ++col) {
    if (sum) {
      for (int s = 0; s < space.r(); ++s) {
        Vector term = v.col(col);
        apply_on_factor(term, factors, s, a);
        out.col(col) += term;
      }
    } else {
      Vector term = v.col(col);
      for (int s = 0; s < space.r(); ++s) apply_on_factor(term, factors, s, a);
      out.col(col) = term;
    }
  }
  return out;
}

}  // namespace

Matrix collective_via_isometry(const SymSpace& space, const Matrix& a) {
  require_dim(space, a, "collective_via_isometry");
  const Matrix& v = space.isometry();
  return v.adjoint() * apply_slotwise(space, v, a, true);
}

Matrix restricted_tensor_power(const SymSpace& space, const Matrix& u) {
  require_dim(space, u, "restricted_tensor_power");
  const Matrix& v = space.isometry();
  return v.adjoint() * apply_slotwise(space, v, u, false);
}

double collective_f2(int d, int r) {
  return static_cast<double>(r) * (d + r) / (static_cast<double>(d) * (d + 1));
}

double collective_f4(int d, int r) {
  const double rd = r, dd = d;
  return rd * (rd + dd) * (6 * rd * rd + 6 * dd * rd + dd * dd - dd) /
         (dd * (dd + 1) * (dd + 2) * (dd + 3));
}

double collective_f22(int d, int r) {
  const double rd = r, dd = d;
  return 3 * rd * (rd + dd) * (rd - 1) * (dd + rd + 1) / (dd * (dd + 1) * (dd + 2) * (dd + 3));
}

TraceMoments collective_trace_moments(const SymSpace& space, const Matrix& x) {
  require_dim(space, x, "collective_trace_moments");
  require_hermitian(x, "collective_trace_moments");
  if (std::abs(x.trace()) > kTol.generator_traceless * std::max(1.0, max_abs(x))) {
    throw ValidationError("collective_trace_moments: X must be traceless");
  }
  const Matrix c = collective(space, x);
  const Matrix c2 = c * c;
  const double dim = space.dim();
  const Matrix x2 = x * x;
  const double tr_x2 = x2.trace().real();
  const double tr_x4 = (x2 * x2).trace().real();

  TraceMoments out;
  out.f2 = collective_f2(space.d(), space.r());
  out.f4 = collective_f4(space.d(), space.r());
  out.f22 = collective_f22(space.d(), space.r());
  out.m2_actual = c2.trace().real() / dim;
  out.m4_actual = (c2 * c2).trace().real() / dim;
  out.m2_predicted = out.f2 * tr_x2;
  out.m4_predicted = out.f4 * tr_x4 + out.f22 * tr_x2 * tr_x2;
  return out;
}

Matrix magnus_operator(const Matrix& h_star, const Matrix& h_theta, double tau) {
  if (!(tau > 0.0)) throw ValidationError("magnus_operator: tau must be positive");
  if (h_star.rows() != h_theta.rows() || h_star.cols() != h_theta.cols()) {
    throw ValidationError("magnus_operator: dimension mismatch");
  }
  require_hermitian(h_star, "magnus_operator");
  require_hermitian(h_theta, "magnus_operator");
  const double reach = tau * (operator_norm(h_star) + operator_norm(h_theta));
  if (reach >= std::numbers::pi) {
    std::ostringstream msg;
    msg << "magnus_operator: tau(||H*|| + ||H_theta||) = " << reach
        << " >= pi leaves the principal branch";
    throw ValidationError(msg.str());
  }
  const Matrix u = hermitian_expm(h_star, -tau) * hermitian_expm(h_theta, tau);
  return unitary_principal_log(u) / tau;
}

}  // namespace hamest
