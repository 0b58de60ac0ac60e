#include "hamest/probe.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "hamest/qcore.hpp"

namespace hamest {

namespace {

Eigen::Index product(const std::vector<int>& factors, std::size_t begin, std::size_t end) {
  Eigen::Index p = 1;
  for (std::size_t i = begin; i < end; ++i) p *= factors[i];
  return p;
}

}  // namespace

PureState::PureState(std::vector<int> factors, Vector amplitudes)
    : factors_(std::move(factors)), amplitudes_(std::move(amplitudes)) {
  if (factors_.empty()) throw ValidationError("PureState: no tensor factors");
  for (int f : factors_) {
    if (f < 1) throw ValidationError("PureState: factor dimensions must be positive");
  }
  if (product(factors_, 0, factors_.size()) != amplitudes_.size()) {
    std::ostringstream msg;
    msg << "PureState: " << amplitudes_.size() << " amplitudes do not match factor product "
        << product(factors_, 0, factors_.size());
    throw ValidationError(msg.str());
  }
  if (std::abs(amplitudes_.squaredNorm() - 1.0) > kTol.norm) {
    std::ostringstream msg;
    msg << "PureState: squared norm " << amplitudes_.squaredNorm() << " differs from 1";
    throw ValidationError(msg.str());
  }
}

PureState mes(int d) {
  if (d < 2) throw ValidationError("mes: dimension must be at least 2");
  Vector amp = Vector::Zero(d * d);
  for (int j = 0; j < d; ++j) amp(j * d + j) = 1.0 / std::sqrt(static_cast<double>(d));
  return PureState({d, d}, std::move(amp));
}

void apply_on_factor(Vector& psi, const std::vector<int>& factors, int slot, const Matrix& op) {
  const auto s = static_cast<std::size_t>(slot);
  if (slot < 0 || s >= factors.size()) throw ValidationError("apply_on_factor: bad slot");
  const Eigen::Index n = factors[s];
  if (op.rows() != n || op.cols() != n) {
    throw ValidationError("apply_on_factor: operator does not match factor dimension");
  }
  const Eigen::Index left = product(factors, 0, s);
  const Eigen::Index right = product(factors, s + 1, factors.size());
  const Matrix op_t = op.transpose();
  for (Eigen::Index l = 0; l < left; ++l) {
    Eigen::Map<Matrix> block(psi.data() + l * n * right, right, n);
    block = (block * op_t).eval();
  }
}

Matrix factor_permutation(const std::vector<int>& factors, const std::vector<int>& perm) {
  const std::size_t k = factors.size();
  if (perm.size() != k) throw ValidationError("factor_permutation: permutation size mismatch");
  std::vector<int> check(perm);
  std::sort(check.begin(), check.end());
  for (std::size_t i = 0; i < k; ++i) {
    if (check[i] != static_cast<int>(i)) {
      throw ValidationError("factor_permutation: not a permutation");
    }
    if (factors[i] != factors[static_cast<std::size_t>(perm[i])]) {
      throw ValidationError("factor_permutation: permuted factors differ in dimension");
    }
  }
  const Eigen::Index dim = product(factors, 0, k);
  Matrix p = Matrix::Zero(dim, dim);
  std::vector<int> digits(k, 0);
  for (Eigen::Index in = 0; in < dim; ++in) {
    Eigen::Index rem = in;
    for (std::size_t i = k; i-- > 0;) {
      digits[i] = static_cast<int>(rem % factors[i]);
      rem /= factors[i];
    }
    Eigen::Index out = 0;
    for (std::size_t s = 0; s < k; ++s) out = out * factors[s] + digits[static_cast<std::size_t>(perm[s])];
    p(out, in) = 1.0;
  }
  return p;
}

Schedule::Schedule(int r, PureState initial, std::vector<ScheduleStep> steps)
    : r_(r), initial_(std::move(initial)), steps_(std::move(steps)) {
  if (r_ < 1) throw ValidationError("Schedule: channel count r must be at least 1");
  if (static_cast<std::size_t>(r_) > initial_.factors().size()) {
    throw ValidationError("Schedule: initial state has fewer factors than driven channels");
  }
  const int d = initial_.factors().front();
  for (int s = 0; s < r_; ++s) {
    if (initial_.factors()[static_cast<std::size_t>(s)] != d) {
      throw ValidationError("Schedule: driven channels must share one dimension");
    }
  }
  for (const ScheduleStep& step : steps_) {
    if (!(step.interval >= 0.0)) throw ValidationError("Schedule: negative interval");
    if (step.feedback) {
      if (step.feedback->rows() != initial_.dim() || step.feedback->cols() != initial_.dim()) {
        throw ValidationError("Schedule: feedback unitary does not act on the total space");
      }
      if (!is_unitary(*step.feedback)) throw ValidationError("Schedule: feedback is not unitary");
    }
  }
}

double Schedule::channel_time() const {
  return std::accumulate(steps_.begin(), steps_.end(), 0.0,
                         [](double acc, const ScheduleStep& s) { return acc + s.interval; });
}

Schedule free_evolution(PureState initial, int r, double t) {
  return Schedule(r, std::move(initial), {ScheduleStep{std::nullopt, t}});
}

namespace {

void check_model(const HamiltonianModel& model, const Schedule& schedule) {
  if (schedule.initial().factors().front() != model.d()) {
    std::ostringstream msg;
    msg << "evolve: schedule channel dimension " << schedule.initial().factors().front()
        << " does not match model dimension " << model.d();
    throw ValidationError(msg.str());
  }
}

Vector run_schedule(const Matrix& h, const Schedule& schedule, double channel_time) {
  Vector psi = schedule.initial().amplitudes();
  const auto& factors = schedule.initial().factors();
  double elapsed = 0.0;
  for (const ScheduleStep& step : schedule.steps()) {
    if (elapsed > channel_time) break;
    if (step.feedback) psi = (*step.feedback) * psi;
    const double dt = std::min(step.interval, channel_time - elapsed);
    if (dt > 0.0) {
      const Matrix u = hermitian_expm(h, dt);
      for (int s = 0; s < schedule.r(); ++s) apply_on_factor(psi, factors, s, u);
    }
    elapsed += step.interval;
  }
  return psi;
}

Vector evolved_amplitudes(const HamiltonianModel& model, const RealVector& theta,
                          const Schedule& schedule, double channel_time) {
  return run_schedule(hamiltonian(model, theta), schedule, channel_time);
}

// X_j summed over the driven channels, applied to psi.
Vector apply_collective_generator(const HamiltonianModel& model, const Schedule& schedule,
                                  int j, const Vector& psi) {
  Vector out = Vector::Zero(psi.size());
  for (int s = 0; s < schedule.r(); ++s) {
    Vector term = psi;
    apply_on_factor(term, schedule.initial().factors(), s, model.generator(j));
    out += term;
  }
  return out;
}

QfiReport qfi_at(const HamiltonianModel& model, const RealVector& theta, const Schedule& schedule,
                 double channel_time, double step) {
  check_model(model, schedule);
  QfiReport rep;
  rep.j = qfi_of_family(
      [&](const RealVector& th) { return evolved_amplitudes(model, th, schedule, channel_time); },
      theta, step);
  rep.trace_j = rep.j.trace();

  const Vector psi = evolved_amplitudes(model, theta, schedule, channel_time);
  const int m = model.m();
  std::vector<Vector> w;
  w.reserve(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) w.push_back(apply_collective_generator(model, schedule, j, psi));
  rep.g.resize(m, m);
  for (int j = 0; j < m; ++j) {
    for (int k = 0; k < m; ++k) {
      rep.g(j, k) = w[static_cast<std::size_t>(j)].dot(w[static_cast<std::size_t>(k)]);
    }
  }
  rep.trace_g = rep.g.trace().real();
  rep.time = schedule.r() * std::min(channel_time, schedule.channel_time());
  rep.bound_4ct2 = 4.0 * model.c() * rep.time * rep.time;
  if (model.spherical()) {
    rep.spherical_bound = 4.0 * model.m() * rep.time * rep.time / model.d();
  }
  return rep;
}

}  // namespace

PureState evolve(const HamiltonianModel& model, const RealVector& theta, const Schedule& schedule) {
  check_model(model, schedule);
  return PureState(schedule.initial().factors(),
                   evolved_amplitudes(model, theta, schedule, schedule.channel_time()));
}

PureState evolve_until(const HamiltonianModel& model, const RealVector& theta,
                       const Schedule& schedule, double channel_time) {
  check_model(model, schedule);
  return PureState(schedule.initial().factors(),
                   evolved_amplitudes(model, theta, schedule, channel_time));
}

RealMatrix qfi_of_family(const StateFamily& family, const RealVector& theta, double step) {
  const Eigen::Index m = theta.size();
  const Vector q = family(theta);
  std::vector<Vector> dq;
  dq.reserve(static_cast<std::size_t>(m));
  for (Eigen::Index j = 0; j < m; ++j) {
    RealVector plus = theta, minus = theta;
    plus(j) += step;
    minus(j) -= step;
    dq.push_back((family(plus) - family(minus)) / (2.0 * step));
  }
  RealMatrix jm(m, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    const auto& dj = dq[static_cast<std::size_t>(j)];
    for (Eigen::Index k = j; k < m; ++k) {
      const auto& dk = dq[static_cast<std::size_t>(k)];
      const Complex v = dj.dot(dk) - dj.dot(q) * q.dot(dk);
      jm(j, k) = jm(k, j) = 4.0 * v.real();
    }
  }
  return jm;
}

QfiReport qfi_matrix(const HamiltonianModel& model, const RealVector& theta,
                     const Schedule& schedule, double step) {
  return qfi_at(model, theta, schedule, schedule.channel_time(), step);
}

GrowthAudit growth_audit(const HamiltonianModel& model, const RealVector& theta,
                         const Schedule& schedule, int n_steps) {
  if (n_steps < 2) throw ValidationError("growth_audit: need at least 2 grid points");
  const double total = schedule.channel_time();
  GrowthAudit audit;
  std::vector<QfiReport> reports;
  reports.reserve(static_cast<std::size_t>(n_steps));
  for (int i = 0; i < n_steps; ++i) {
    const double t = total * i / (n_steps - 1);
    reports.push_back(qfi_at(model, theta, schedule, t, kTol.fd_step));
    const QfiReport& rep = reports.back();
    audit.samples.push_back({rep.time, rep.trace_j, 4.0 * rep.trace_g, rep.bound_4ct2});
    const double limit =
        rep.bound_4ct2 * (1.0 + kTol.qfi_relative_slack) + kTol.qfi_absolute_floor;
    if (rep.trace_j > limit) {
      std::ostringstream msg;
      msg << "Tr J = " << rep.trace_j << " exceeds 4ct^2 = " << rep.bound_4ct2;
      audit.violations.push_back({rep.time, msg.str()});
    }
  }
  double max_trace_g = 0.0;
  for (const QfiReport& rep : reports) max_trace_g = std::max(max_trace_g, rep.trace_g);
  // Growth rate in channel time is bounded by sqrt(4 Tr G) with G built from
  // the collective generators.
  const double dt = total / (n_steps - 1);
  const double rate = std::sqrt(4.0 * max_trace_g);
  for (int i = 0; i + 1 < n_steps; ++i) {
    const auto a = static_cast<std::size_t>(i);
    const double inc = std::sqrt(std::max(0.0, reports[a + 1].trace_j)) -
                       std::sqrt(std::max(0.0, reports[a].trace_j));
    const double allowed = rate * dt * (1.0 + kTol.growth_slack) + kTol.growth_absolute_floor;
    if (inc > allowed) {
      std::ostringstream msg;
      msg << "sqrt(Tr J) grew by " << inc << " over one grid step, allowed " << allowed;
      audit.violations.push_back({reports[a + 1].time, msg.str()});
    }
  }
  return audit;
}

int trotter_slices(double interval, double norm_h, double norm_h_star, int r, double tolerance) {
  if (tolerance <= 0.0) throw ValidationError("trotter_slices: tolerance must be positive");
  const double a = norm_h, b = norm_h_star;
  const double coeff = std::pow(interval, 3) * (a * a * b / 3.0 + a * b * b / 6.0) * r;
  const double k = std::ceil(std::sqrt(coeff / tolerance));
  return std::max(1, static_cast<int>(k));
}

Schedule trotterize(const Schedule& schedule, std::size_t step_index, const Matrix& h_star,
                    int slices) {
  if (step_index >= schedule.steps().size()) throw ValidationError("trotterize: bad step index");
  if (slices < 1) throw ValidationError("trotterize: need at least one slice");
  const auto& factors = schedule.initial().factors();
  const ScheduleStep& original = schedule.steps()[step_index];
  const double h = original.interval / slices;

  // (e^{i s H*})^{(x) r} (x) I on the total space.
  auto counter = [&](double s) {
    const Matrix w = hermitian_expm(h_star, -s);
    Matrix total = Matrix::Identity(schedule.initial().dim(), schedule.initial().dim());
    for (Eigen::Index col = 0; col < total.cols(); ++col) {
      Vector v = total.col(col);
      for (int slot = 0; slot < schedule.r(); ++slot) apply_on_factor(v, factors, slot, w);
      total.col(col) = v;
    }
    return total;
  };
  const Matrix half = counter(0.5 * h);
  const Matrix full = counter(h);

  std::vector<ScheduleStep> steps;
  steps.reserve(schedule.steps().size() + static_cast<std::size_t>(slices) + 1);
  for (std::size_t i = 0; i < step_index; ++i) steps.push_back(schedule.steps()[i]);
  Matrix first = half;
  if (original.feedback) first = half * (*original.feedback);
  steps.push_back({first, h});
  for (int k = 1; k < slices; ++k) steps.push_back({full, h});
  steps.push_back({half, 0.0});
  for (std::size_t i = step_index + 1; i < schedule.steps().size(); ++i) {
    steps.push_back(schedule.steps()[i]);
  }
  return Schedule(schedule.r(), schedule.initial(), std::move(steps));
}

}  // namespace hamest
