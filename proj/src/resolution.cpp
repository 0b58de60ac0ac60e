#include <cmath>
#include <limits>

#include "hamest/estimate.hpp"
#include "hamest/qcore.hpp"

namespace hamest {

namespace {

RealVector random_direction(Eigen::Index m, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  RealVector u(m);
  do {
    for (Eigen::Index i = 0; i < m; ++i) u(i) = normal(rng);
  } while (u.norm() == 0.0);
  return u / u.norm();
}

RealVector random_in_ball(Eigen::Index m, double radius, Rng& rng) {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double rho = radius * std::pow(uniform(rng), 1.0 / static_cast<double>(m));
  return rho * random_direction(m, rng);
}

}  // namespace

double delta_resolution(const HamiltonianModel& model, double tau, double radius, double delta,
                        int n_pairs, Rng& rng, const PostselectionFrame* frame) {
  if (!(radius > 0.0)) throw ValidationError("delta_resolution: radius must be positive");
  if (delta < 0.0 || delta > 2.0 * radius) {
    throw ValidationError("delta_resolution: need 0 <= delta <= 2E");
  }
  if (n_pairs < 1) throw ValidationError("delta_resolution: need at least one pair");
  if (frame != nullptr && frame->probe_dim() != static_cast<Eigen::Index>(model.d()) * model.d()) {
    throw ValidationError("delta_resolution: frame does not act on the one-channel probe space");
  }
  const Eigen::Index m = model.m();
  auto probe = [&](const RealVector& theta) {
    Vector q = apply_to_mes(hermitian_expm(hamiltonian(model, theta), tau));
    if (frame != nullptr) q = project_onto_frame(*frame, q).reduced;
    return q;
  };

  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_pairs; ++i) {
    RealVector a, b;
    // Four in five pairs sit on the constraint boundary ||a - b|| = delta.
    const bool boundary = (i % 5) != 4;
    for (;;) {
      a = random_in_ball(m, radius, rng);
      if (boundary) {
        const RealVector u = random_direction(m, rng);
        b = a + delta * u;
        if (b.norm() > radius) b = a - delta * u;
      } else {
        b = random_in_ball(m, radius, rng);
      }
      if (b.norm() <= radius && (a - b).norm() >= delta * (1.0 - 1e-12)) break;
    }
    best = std::min(best, infidelity(probe(a), probe(b)));
  }
  return best;
}

}  // namespace hamest
