#include "hamest/verify.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include "hamest/bounds.hpp"
#include "hamest/estimate.hpp"
#include "hamest/experiment.hpp"
#include "hamest/qcore.hpp"
#include "hamest/symsub.hpp"

namespace hamest {

Schedule random_schedule(int d, int r, double max_total_time, Rng& rng) {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::vector<int> factors(static_cast<std::size_t>(r), d);
  factors.push_back(d);
  Eigen::Index dim = 1;
  for (int f : factors) dim *= f;
  Vector psi = haar_unitary(static_cast<int>(dim), rng).col(0);
  const int n = 1 + static_cast<int>(uniform(rng) * 4.0) % 4;
  std::vector<double> w(static_cast<std::size_t>(n));
  double total = 0.0;
  for (double& x : w) total += (x = uniform(rng) + 1e-3);
  const double channel_time = max_total_time * uniform(rng) / r;
  std::vector<ScheduleStep> steps;
  for (double x : w) {
    ScheduleStep s;
    if (uniform(rng) < 0.75) s.feedback = haar_unitary(static_cast<int>(dim), rng);
    s.interval = channel_time * x / total;
    steps.push_back(std::move(s));
  }
  return Schedule(r, PureState(factors, psi), std::move(steps));
}

HamiltonianModel random_model(int d, Rng& rng) {
  static constexpr ModelKind kinds[] = {ModelKind::full, ModelKind::phase, ModelKind::offdiag};
  std::uniform_int_distribution<int> pick(0, 2);
  return make_model(kinds[pick(rng)], d);
}

namespace {

RealVector random_theta(int m, double radius, Rng& rng) {
  return sample_theta(m, radius, false, rng);
}

RealMatrix gaussian_matrix(int m, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  RealMatrix g(m, m);
  for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = normal(rng);
  return g;
}

struct Runner {
  std::string suite;
  std::vector<PropertyResult>* out;

  void check(const std::string& name, const std::function<std::string(bool&)>& body) {
    PropertyResult r;
    r.suite = suite;
    r.name = name;
    try {
      bool ok = true;
      r.detail = body(ok);
      r.passed = ok;
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    out->push_back(std::move(r));
  }
};

std::string num(double v) {
  std::ostringstream s;
  s.precision(4);
  s << v;
  return s.str();
}

void qfi_suite(Runner& run) {
  run.check("qfi saturation at theta=0 (full, MES)", [](bool& ok) {
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
    ok = worst <= 1e-6;
    return "max entry error " + num(worst);
  });
  run.check("QFI growth audit over 100 random schedules", [](bool& ok) {
    Rng rng(20240601);
    int violations = 0;
    for (int i = 0; i < 100; ++i) {
      const int d = 2 + i % 2;
      const HamiltonianModel model = random_model(d, rng);
      const Schedule s = random_schedule(d, 1, 3.0, rng);
      const RealVector theta = random_theta(model.m(), 1.0, rng);
      if (!growth_audit(model, theta, s, 4).passed()) ++violations;
    }
    ok = violations == 0;
    return std::to_string(violations) + " violations";
  });
  run.check("offdiag free evolution saturates 4ct^2", [](bool& ok) {
    const HamiltonianModel model = make_model(ModelKind::offdiag, 2);
    Vector e2 = Vector::Zero(2);
    e2(1) = 1.0;
    const QfiReport q =
        qfi_matrix(model, RealVector::Zero(1), free_evolution(PureState({2}, e2), 1, 1.3));
    const double ratio = q.trace_j / q.bound_4ct2;
    ok = std::abs(ratio - 1.0) <= 1e-4;
    return "Tr J / 4ct^2 = " + num(ratio);
  });
  run.check("schwartz chain Tr[J^-1] Tr[J] >= m^2", [](bool& ok) {
    Rng rng(77);
    double worst = std::numeric_limits<double>::infinity();
    int tested = 0;
    for (int i = 0; i < 40; ++i) {
      const int d = 2 + i % 2;
      const HamiltonianModel model = make_model(ModelKind::full, d);
      const Schedule s = random_schedule(d, 1, 2.0, rng);
      const QfiReport q = qfi_matrix(model, random_theta(model.m(), 1.0, rng), s);
      Eigen::SelfAdjointEigenSolver<RealMatrix> es(q.j);
      if (es.eigenvalues()(0) < 1e-6 * std::max(1.0, q.trace_j)) continue;
      const double lhs = es.eigenvalues().cwiseInverse().sum() * q.trace_j;
      const double m2 = static_cast<double>(model.m()) * model.m();
      worst = std::min(worst, lhs / m2 - 1.0);
      ++tested;
    }
    ok = tested > 0 && worst >= -1e-8;
    return std::to_string(tested) + " matrices, min relative slack " + num(worst);
  });
  run.check("MES trace identity for G", [](bool& ok) {
    double worst = 0.0;
    for (int d : {2, 3, 4}) {
      const HamiltonianModel model = make_model(ModelKind::full, d);
      const QfiReport q =
          qfi_matrix(model, RealVector::Zero(model.m()), free_evolution(mes(d), 1, 0.0));
      const Matrix want = Matrix::Identity(model.m(), model.m()) / static_cast<double>(d);
      worst = std::max(worst, max_abs(q.g - want));
    }
    ok = worst <= 1e-10;
    return "max |G - I/d| = " + num(worst);
  });
}

void collective_suite(Runner& run) {
  run.check("trace-moment closed forms vs tensor construction", [](bool& ok) {
    Rng rng(4242);
    double worst = 0.0;
    for (int d : {2, 3}) {
      for (int r = 1; r <= 4; ++r) {
        const SymSpace space = sym_space(d, r);
        for (int i = 0; i < 20; ++i) {
          const Matrix x = random_traceless_hermitian(d, rng);
          const Matrix cx = collective_via_isometry(space, x);
          const double dim = space.dim();
          const double m2 = (cx * cx).trace().real() / dim;
          const Matrix cx2 = cx * cx;
          const double m4 = (cx2 * cx2).trace().real() / dim;
          const double tx2 = (x * x).trace().real();
          const double tx4 = (x * x * x * x).trace().real();
          const double p2 = collective_f2(d, r) * tx2;
          const double p4 = collective_f4(d, r) * tx4 + collective_f22(d, r) * tx2 * tx2;
          worst = std::max({worst, std::abs(m2 - p2) / std::max(1.0, p2),
                            std::abs(m4 - p4) / std::max(1.0, p4)});
        }
      }
    }
    ok = worst <= 1e-9;
    return "max relative error " + num(worst);
  });
  run.check("occupation route equals isometry route", [](bool& ok) {
    Rng rng(99);
    double worst = 0.0;
    for (int d : {2, 3}) {
      for (int r = 1; r <= 4; ++r) {
        const SymSpace space = sym_space(d, r);
        const Matrix a = random_hermitian(d, rng);
        worst = std::max(worst, max_abs(collective(space, a) - collective_via_isometry(space, a)));
      }
    }
    ok = worst <= 1e-10;
    return "max entry difference " + num(worst);
  });
  run.check("restriction identity", [](bool& ok) {
    Rng rng(7);
    double worst = 0.0;
    for (int d : {2, 3}) {
      for (int r = 1; r <= 4; ++r) {
        const SymSpace space = sym_space(d, r);
        const Matrix h = random_hermitian(d, rng);
        const double tau = 0.7;
        const Matrix lhs = hermitian_expm(collective(space, h), tau);
        const Matrix rhs = restricted_tensor_power(space, hermitian_expm(h, tau));
        worst = std::max(worst, max_abs(lhs - rhs));
      }
    }
    ok = worst <= 1e-9;
    return "max entry difference " + num(worst);
  });
  run.check("frame orthonormality", [](bool& ok) {
    double worst = 0.0;
    for (ModelKind kind : {ModelKind::full, ModelKind::phase, ModelKind::offdiag}) {
      for (int d : {2, 3, 4}) {
        const HamiltonianModel model = make_model(kind, d);
        for (int r = 1; r <= 4; ++r) {
          const PostselectionFrame f = make_frame(model, occupation_space(d, r));
          const Matrix gram = f.basis.adjoint() * f.basis;
          worst = std::max(worst, max_abs(gram - Matrix::Identity(gram.rows(), gram.cols())));
        }
      }
    }
    ok = worst <= 1e-9;
    return "max Gram defect " + num(worst);
  });
  run.check("MES trace identity", [](bool& ok) {
    Rng rng(5);
    double worst = 0.0;
    for (int d : {2, 3, 5}) {
      const Matrix a = haar_unitary(d, rng) + random_hermitian(d, rng);
      const Complex lhs = apply_to_mes(Matrix::Identity(d, d)).dot(apply_to_mes(a));
      worst = std::max(worst, std::abs(lhs - a.trace() / static_cast<double>(d)));
    }
    ok = worst <= 1e-12;
    return "max deviation " + num(worst);
  });
  run.check("superoperator identity P A|Phi> = S(A)|Phi>", [](bool& ok) {
    Rng rng(11);
    double worst = 0.0;
    for (ModelKind kind : {ModelKind::full, ModelKind::phase, ModelKind::offdiag}) {
      for (int d : {2, 3}) {
        const HamiltonianModel model = make_model(kind, d);
        const PostselectionFrame f = make_frame(model);
        for (int i = 0; i < 5; ++i) {
          const Matrix a = haar_unitary(d, rng) + random_hermitian(d, rng);
          const Vector lhs = f.basis * (f.basis.adjoint() * apply_to_mes(a));
          const Vector rhs = apply_to_mes(superop_s(model, a));
          worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
        }
      }
    }
    ok = worst <= 1e-10;
    return "max deviation " + num(worst);
  });
  run.check("worked moments 4/3 and 8/3 (d=2, r=2)", [](bool& ok) {
    Matrix z = Matrix::Zero(2, 2);
    z(0, 0) = 1.0 / std::sqrt(2.0);
    z(1, 1) = -1.0 / std::sqrt(2.0);
    const TraceMoments t = collective_trace_moments(sym_space(2, 2), z);
    const double e = std::max({std::abs(t.m2_actual - 4.0 / 3), std::abs(t.m2_predicted - 4.0 / 3),
                               std::abs(t.m4_actual - 8.0 / 3), std::abs(t.m4_predicted - 8.0 / 3)});
    ok = e <= 1e-12;
    return "m2 = " + num(t.m2_actual) + ", m4 = " + num(t.m4_actual);
  });
}

void resolution_suite(Runner& run) {
  run.check("delta-resolution constant in [0.5, 4]", [](bool& ok) {
    Rng rng(31337);
    double lo = 1e300, hi = 0.0;
    for (int d : {2, 3, 4}) {
      const HamiltonianModel model = make_model(ModelKind::full, d);
      const double radius = 1.0;
      for (double tau : {0.3, 0.5}) {
        for (double delta : {0.05, 0.2}) {
          const double id = delta_resolution(model, tau, radius, delta, 200, rng);
          const double ratio = id * id * d / (tau * tau * delta * delta);
          lo = std::min(lo, ratio);
          hi = std::max(hi, ratio);
        }
      }
    }
    ok = lo >= 0.5 && hi <= 4.0;
    return "ratio range [" + num(lo) + ", " + num(hi) + "]";
  });
  run.check("phase model closed form sin(tau delta / sqrt 2)", [](bool& ok) {
    Rng rng(1);
    const HamiltonianModel model = make_model(ModelKind::phase, 2);
    double worst = 0.0;
    for (double tau : {0.2, 0.5, 1.0}) {
      for (double delta : {0.1, 0.5}) {
        const double got = delta_resolution(model, tau, 1.0, delta, 50, rng);
        worst = std::max(worst, std::abs(got - std::sin(tau * delta / std::sqrt(2.0))));
      }
    }
    ok = worst <= 1e-8;
    return "max deviation " + num(worst);
  });
  run.check("tomography overhead <= 10 m/N", [](bool& ok) {
    Rng rng(2718);
    double worst = 0.0;
    for (int dim : {2, 3, 4}) {
      for (long n : {100L, 1000L}) {
        double sum = 0.0;
        const int seeds = 100;
        for (int s = 0; s < seeds; ++s) {
          const Vector psi = haar_unitary(dim, rng).col(0);
          sum += squared_infidelity(tomography(psi, n, rng), psi);
        }
        worst = std::max(worst, (sum / seeds) / (static_cast<double>(dim - 1) / n));
      }
    }
    ok = worst <= 10.0;
    return "worst mean / (m/N) = " + num(worst);
  });
  run.check("first-order inversion within 1% at tau|theta| = 0.05", [](bool& ok) {
    Rng rng(3);
    double worst = 0.0;
    for (int d : {2, 3}) {
      const HamiltonianModel model = make_model(ModelKind::full, d);
      const PostselectionFrame f = make_frame(model);
      for (int i = 0; i < 10; ++i) {
        RealVector theta = random_theta(model.m(), 1.0, rng);
        theta *= 1.0 / theta.norm();
        const double tau = 0.05;
        const Vector q = apply_to_mes(hermitian_expm(hamiltonian(model, theta), tau));
        const RealVector est = invert_theta(project_onto_frame(f, q).reduced, tau, f);
        worst = std::max(worst, (est - theta).norm() / theta.norm());
      }
    }
    ok = worst <= 0.01;
    return "max relative error " + num(worst);
  });
}

void bounds_suite(Runner& run) {
  run.check("QCR chain worked example", [](bool& ok) {
    const QcrChain q = qcr_chain(3, 2, 0.1, 1.0, 1.0);
    const double t = time_lower_bound(3, 2, 0.1);
    ok = std::abs(q.trV_lower - 1.5) <= 1e-12 && std::abs(t - std::sqrt(6.0) / 0.2) <= 1e-12;
    return "trV_lower = " + num(q.trV_lower) + ", T_lower = " + num(t);
  });
  run.check("unbiased reduction D = 0", [](bool& ok) {
    Rng rng(8);
    const RealMatrix g = gaussian_matrix(3, rng);
    const RealMatrix j = g * g.transpose() + RealMatrix::Identity(3, 3);
    const BiasedCramerRao b = biased_cr_rhs(j, RealMatrix::Zero(3, 3), 10.0);
    const double want = j.inverse().trace() / 10.0;
    ok = std::abs(b.matrix_bound_trace - want) <= 1e-12 * want;
    return "matrix bound " + num(b.matrix_bound_trace) + " vs Tr J^-1 / N " + num(want);
  });
  run.check("scalar bound never exceeds matrix bound", [](bool& ok) {
    Rng rng(9);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      const int m = 1 + i % 4;
      const RealMatrix g = gaussian_matrix(m, rng);
      const RealMatrix j = g * g.transpose() + 1e-3 * RealMatrix::Identity(m, m);
      const BiasedCramerRao b = biased_cr_rhs(j, gaussian_matrix(m, rng), 3.0);
      worst = std::max(worst, b.scalar_bound / b.matrix_bound_trace - 1.0);
    }
    ok = worst <= 1e-10;
    return "max scalar/matrix - 1 = " + num(worst);
  });
  run.check("time bounds homogeneous in delta", [](bool& ok) {
    const double d1 = 0.1, d2 = 0.05;
    const double r1 = time_lower_bound(8, 3, d2) / time_lower_bound(8, 3, d1);
    const double r2 = time_upper_general(8, 3, d2) / time_upper_general(8, 3, d1);
    const double r3 = fewparam_time_upper(8, 3, d2, 1.0) / fewparam_time_upper(8, 3, d1, 1.0);
    const double r4 = nonspherical_time_lower(1.0, 3, d2).as_printed /
                      nonspherical_time_lower(1.0, 3, d1).as_printed;
    ok = std::abs(r1 - 2) < 1e-12 && std::abs(r2 - 2) < 1e-12 && std::abs(r3 - 2) < 1e-12 &&
         std::abs(r4 - 4) < 1e-12;
    return "ratios " + num(r1) + ", " + num(r2) + ", " + num(r3) + ", " + num(r4);
  });
  run.check("nonspherical bound reduces to spherical at c = m/d", [](bool& ok) {
    const double got = nonspherical_time_lower(8.0 / 3.0, 3, 0.1).value;
    const double want = time_lower_bound(8, 3, 0.1);
    ok = std::abs(got - want) <= 1e-12 * want;
    return num(got) + " vs " + num(want);
  });
  run.check("lower bound below general upper bound", [](bool& ok) {
    ok = true;
    for (int d = 2; d <= 6; ++d) {
      const int m = d * d - 1;
      ok = ok && time_lower_bound(m, d, 0.01) <= time_upper_general(m, d, 0.01);
    }
    return std::string(ok ? "holds" : "violated") + " for full models d = 2..6";
  });
}

void reproducibility_suite(Runner& run) {
  run.check("reproducibility and worker-count invariance", [](bool& ok) {
    ExperimentConfig c;
    c.scheme = Scheme::adaptive;
    c.delta = 0.1;
    c.trials = 4;
    c.seed = 123;
    auto csv = [&](int jobs) {
      std::ostringstream o;
      write_csv(o, c, 3, run_trials(c, jobs));
      return o.str();
    };
    const std::string a = csv(1), b = csv(1), p = csv(3);
    ok = a == b && a == p;
    return ok ? "identical CSV for reruns and 3 workers" : "CSV differs";
  });
}

}  // namespace

bool is_verify_suite(std::string_view suite) {
  return suite == "all" || suite == "qfi" || suite == "collective" || suite == "resolution" ||
         suite == "bounds";
}

std::vector<PropertyResult> run_verify(std::string_view suite) {
  if (!is_verify_suite(suite)) {
    throw ValidationError("unknown verify suite '" + std::string(suite) +
                          "' (valid: all, qfi, collective, resolution, bounds)");
  }
  std::vector<PropertyResult> out;
  const bool all = suite == "all";
  if (all || suite == "qfi") {
    Runner r{"qfi", &out};
    qfi_suite(r);
  }
  if (all || suite == "collective") {
    Runner r{"collective", &out};
    collective_suite(r);
  }
  if (all || suite == "resolution") {
    Runner r{"resolution", &out};
    resolution_suite(r);
  }
  if (all || suite == "bounds") {
    Runner r{"bounds", &out};
    bounds_suite(r);
  }
  if (all) {
    Runner r{"estimate", &out};
    reproducibility_suite(r);
  }
  return out;
}

}  // namespace hamest
