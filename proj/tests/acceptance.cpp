// Acceptance gate: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "hamest/bounds.hpp"
#include "hamest/estimate.hpp"
#include "hamest/experiment.hpp"
#include "hamest/qcore.hpp"
#include "hamest/symsub.hpp"
#include "hamest/verify.hpp"
#include "oracles.hpp"

using namespace hamest;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::string fmt(const char* f, double a, double b, double c) {
  char buf[200];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

RealVector unit(int m, Rng& rng) { return sample_theta(m, 1.0, true, rng).normalized(); }

// 1. QFI saturation at theta = 0 for the MES probe.
Outcome qfi_saturation() {
  double worst = 0.0;
  for (int d : {2, 3}) {
    const HamiltonianModel model = make_model(ModelKind::full, d);
    for (double tau : {0.5, 1.0}) {
      const QfiReport q =
          qfi_matrix(model, RealVector::Zero(model.m()), free_evolution(mes(d), 1, tau));
      const RealMatrix want = (4.0 / d) * tau * tau * RealMatrix::Identity(model.m(), model.m());
      worst = std::max(worst, (q.j - want).cwiseAbs().maxCoeff());
    }
  }
  return {worst <= 1e-6, fmt("max |J - (4/d) tau^2 I| = %.2e (tol 1e-6)", worst)};
}

// 2. Growth audit over 1000 random schedules plus the saturating two-level case.
Outcome growth_audit_random() {
  Rng rng(1000);
  int violations = 0;
  double max_ratio = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const int d = 2 + i % 2;
    const int r = (i % 4 == 0 && d == 2) ? 2 : 1;
    const HamiltonianModel model = random_model(d, rng);
    const Schedule s = random_schedule(d, r, 3.0, rng);
    const RealVector theta = sample_theta(model.m(), 1.0, false, rng);
    const GrowthAudit a = growth_audit(model, theta, s, 4);
    violations += static_cast<int>(a.violations.size());
    const GrowthSample& end = a.samples.back();
    if (end.bound_4ct2 > 1e-9) max_ratio = std::max(max_ratio, end.trace_j / end.bound_4ct2);
  }
  const HamiltonianModel off = make_model(ModelKind::offdiag, 2);
  Vector e2 = Vector::Zero(2);
  e2(1) = 1.0;
  const GrowthAudit sat =
      growth_audit(off, RealVector::Zero(1), free_evolution(PureState({2}, e2), 1, 3.0), 6);
  double sat_dev = 0.0;
  for (std::size_t i = 1; i < sat.samples.size(); ++i) {
    sat_dev = std::max(sat_dev, std::abs(sat.samples[i].trace_j / sat.samples[i].bound_4ct2 - 1));
  }
  const bool pass = violations == 0 && sat.passed() && sat_dev <= 1e-4;
  return {pass, fmt("%.0f violations in 1000 schedules (max Tr J / 4ct^2 = %.3f); "
                    "offdiag saturation |ratio - 1| = %.1e",
                    violations, max_ratio, sat_dev)};
}

// 3. Trace-moment identities against the brute-force symmetrizer.
Outcome collective_moments() {
  Rng rng(3000);
  double worst = 0.0;
  for (int d : {2, 3}) {
    for (int r = 1; r <= 4; ++r) {
      const Matrix basis = oracle::symmetric_basis(d, r);
      const SymSpace space = occupation_space(d, r);
      for (int i = 0; i < 100; ++i) {
        const Matrix x = random_traceless_hermitian(d, rng);
        const Matrix c = basis.adjoint() * oracle::slot_sum(x, r) * basis;
        const Matrix c2 = c * c;
        const double dim = static_cast<double>(basis.cols());
        const double m2 = c2.trace().real() / dim, m4 = (c2 * c2).trace().real() / dim;
        const TraceMoments t = collective_trace_moments(space, x);
        for (auto [got, want] : {std::pair{t.m2_actual, m2}, {t.m2_predicted, m2},
                                 {t.m4_actual, m4}, {t.m4_predicted, m4}}) {
          worst = std::max(worst, std::abs(got - want) / std::max(1.0, std::abs(want)));
        }
      }
    }
  }
  Matrix z = Matrix::Zero(2, 2);
  z(0, 0) = 1 / std::sqrt(2.0);
  z(1, 1) = -1 / std::sqrt(2.0);
  const TraceMoments w = collective_trace_moments(occupation_space(2, 2), z);
  const double worked = std::max({std::abs(w.m2_actual - 4.0 / 3), std::abs(w.m2_predicted - 4.0 / 3),
                                  std::abs(w.m4_actual - 8.0 / 3), std::abs(w.m4_predicted - 8.0 / 3)});
  return {worst <= 1e-9 && worked <= 1e-9,
          fmt("max relative error %.1e over 800 operators; worked values 4/3, 8/3 off by %.1e",
              worst, worked)};
}

const std::vector<double> kSweep{0.2, 0.1, 0.05, 0.025};

ExperimentConfig sweep_config(Scheme scheme) {
  ExperimentConfig c;
  c.model = ModelKind::full;
  c.d = 2;
  c.scheme = scheme;
  c.radius = 1.0;
  c.trials = 100;
  c.seed = 4000;
  return c;
}

SweepResult& adaptive_sweep() {
  static SweepResult s = run_sweep(sweep_config(Scheme::adaptive), kSweep);
  return s;
}

// 4. Scaling separation between adaptive and one-channel estimation.
Outcome scaling_separation() {
  const SweepResult& a = adaptive_sweep();
  const SweepResult o = run_sweep(sweep_config(Scheme::one_channel), kSweep);
  const bool pass = a.fit.slope >= -1.25 && a.fit.slope <= -0.8 && o.fit.slope >= -2.3 &&
                    o.fit.slope <= -1.7;
  double min_rate = 1.0;
  for (const auto* s : {&a, &o})
    for (const SweepPoint& p : s->points) min_rate = std::min(min_rate, p.summary.success_rate);
  return {pass, fmt("adaptive slope %.3f in [-1.25,-0.8]; one-channel slope %.3f in [-2.3,-1.7]; "
                    "min success rate %.2f",
                    a.fit.slope, o.fit.slope, min_rate)};
}

// 5. Many-channel vs adaptive median time.
Outcome scheme_equivalence() {
  const SweepResult& a = adaptive_sweep();
  const SweepResult m = run_sweep(sweep_config(Scheme::many_channel), kSweep);
  double lo = 1e300, hi = 0.0;
  for (std::size_t i = 0; i < kSweep.size(); ++i) {
    const double ratio = m.points[i].summary.median_T / a.points[i].summary.median_T;
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  double min_rate = 1.0;
  for (const SweepPoint& p : m.points) min_rate = std::min(min_rate, p.summary.success_rate);
  return {lo >= 0.25 && hi <= 4.0,
          fmt("median T ratio many/adaptive in [%.3f, %.3f] (need within factor 4); "
              "many-channel min success rate %.2f",
              lo, hi, min_rate)};
}

// 6. delta-resolution constant and the phase-model closed form.
Outcome resolution_constant() {
  Rng rng(6000);
  double lo = 1e300, hi = 0.0;
  for (int d : {2, 3, 4}) {
    const HamiltonianModel model = make_model(ModelKind::full, d);
    const PostselectionFrame frame = make_frame(model);
    for (double tau : {0.1, 0.3, 0.5}) {
      for (double delta : {0.025, 0.1, 0.4}) {
        for (const PostselectionFrame* f : {static_cast<const PostselectionFrame*>(nullptr), &frame}) {
          const double id = delta_resolution(model, tau, 1.0, delta, 300, rng, f);
          const double ratio = id * id * d / (tau * tau * delta * delta);
          lo = std::min(lo, ratio);
          hi = std::max(hi, ratio);
        }
      }
    }
  }
  const HamiltonianModel phase = make_model(ModelKind::phase, 2);
  double closed = 0.0;
  for (double tau : {0.2, 0.5, 1.0}) {
    for (double delta : {0.05, 0.2, 1.0}) {
      const double got = delta_resolution(phase, tau, 1.0, delta, 100, rng);
      closed = std::max(closed, std::abs(got - std::sin(tau * delta / std::sqrt(2.0))));
    }
  }
  return {lo >= 0.5 && hi <= 4.0 && closed <= 1e-8,
          fmt("I^2 d/(tau^2 delta^2) in [%.3f, %.3f] (need [0.5, 4]); phase closed form off by %.1e",
              lo, hi, closed)};
}

// 7. Tomography overhead against m/N.
Outcome tomography_overhead() {
  Rng rng(7000);
  double worst = 0.0;
  for (int dim : {2, 3, 4}) {
    for (long n : {100L, 1000L}) {
      double sum = 0.0;
      for (int s = 0; s < 500; ++s) {
        const Vector psi = haar_unitary(dim, rng).col(0);
        sum += squared_infidelity(tomography(psi, n, rng), psi);
      }
      worst = std::max(worst, (sum / 500) / (static_cast<double>(dim - 1) / n));
    }
  }
  return {worst <= 10.0, fmt("worst mean squared infidelity = %.2f x m/N (need <= 10)", worst)};
}

// 8. Biased Cramer-Rao bound for the simulated tomographic estimator.
Outcome biased_cramer_rao() {
  const HamiltonianModel model = make_model(ModelKind::full, 2);
  EstimationConstants k;
  k.refine_steps = 0;
  const double tau = 0.3;
  const long copies = 200;
  const int trials = 3000;
  const double h = 0.1;
  RealVector theta0(3);
  theta0 << 0.5, -0.3, 0.2;

  Rng rng(8000);
  auto run = [&](const RealVector& theta, std::vector<RealVector>* samples) {
    RealVector mean = RealVector::Zero(3);
    for (int t = 0; t < trials; ++t) {
      const StageEstimate e = adaptive_stage(model, theta, RealVector::Zero(3), tau, copies, k, rng);
      mean += e.theta_hat;
      if (samples) samples->push_back(e.theta_hat);
    }
    return RealVector(mean / trials);
  };
  std::vector<RealVector> samples;
  const RealVector mean0 = run(theta0, &samples);
  RealMatrix d(3, 3);
  for (int j = 0; j < 3; ++j) {
    RealVector plus = theta0, minus = theta0;
    plus(j) += h;
    minus(j) -= h;
    d.col(j) = (run(plus, nullptr) - run(minus, nullptr)) / (2 * h);
  }
  d -= RealMatrix::Identity(3, 3);

  std::vector<double> sq;
  double tr_v = 0.0;
  for (const RealVector& s : samples) {
    sq.push_back((s - mean0).squaredNorm());
    tr_v += sq.back();
  }
  tr_v /= trials - 1;
  double var_sq = 0.0;
  for (double v : sq) var_sq += (v - tr_v) * (v - tr_v);
  const double se = std::sqrt(var_sq / (trials - 1) / trials);

  auto family = [&](const RealVector& th) {
    return Vector(apply_to_mes(hermitian_expm(hamiltonian(model, th), tau)));
  };
  const RealMatrix j = qfi_of_family(family, theta0);
  const BiasedCramerRao b = biased_cr_rhs(j, d, static_cast<double>(copies));
  const BiasedCramerRao unbiased = biased_cr_rhs(j, RealMatrix::Zero(3, 3), copies);
  const Eigen::SelfAdjointEigenSolver<RealMatrix> es(j);
  const double plain = es.eigenvalues().cwiseInverse().sum() / copies;
  const bool reduces = std::abs(unbiased.matrix_bound_trace - plain) <= 1e-12 * plain;
  return {tr_v + 2 * se >= b.matrix_bound_trace && reduces,
          fmt("empirical Tr V = %.4g (SE %.2g) >= bound %.4g", tr_v, se, b.matrix_bound_trace) +
              fmt("; Tr D = %.3f", d.trace()) +
              (reduces ? "; D = 0 reduces to Tr J^-1/N" : "; D = 0 mismatch")};
}

// 9. Invariant suite.
Outcome invariant_suite() {
  const std::vector<PropertyResult> results = run_verify("all");
  int failed = 0;
  std::string names;
  for (const PropertyResult& r : results) {
    if (!r.passed) {
      ++failed;
      names += " " + r.name + ";";
    }
  }
  return {failed == 0, fmt("%.0f/%.0f properties passed", results.size() - failed, results.size()) +
                           (failed ? " failing:" + names : "")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"QFI saturation", qfi_saturation},
      {"QFI growth audit", growth_audit_random},
      {"collective trace moments", collective_moments},
      {"scaling separation", scaling_separation},
      {"scheme equivalence", scheme_equivalence},
      {"delta-resolution constant", resolution_constant},
      {"tomography overhead", tomography_overhead},
      {"biased Cramer-Rao", biased_cramer_rao},
      {"invariant suite", invariant_suite},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] criterion %zu (%s): %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first, o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += !o.pass;
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
