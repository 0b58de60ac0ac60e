#include <algorithm>
#include <cmath>
#include <sstream>

#include "hamest/estimate.hpp"
#include "hamest/qcore.hpp"

namespace hamest {

int stage_count(double radius, double delta) {
  if (!(delta > 0.0) || !(radius > 0.0)) throw ValidationError("stage_count: need E, delta > 0");
  const double ratio = std::log2(radius / delta);
  return std::max(0, static_cast<int>(std::ceil(ratio - 1e-12)));
}

double time_scale(const HamiltonianModel& model, double radius) {
  return max_energy(model, radius);
}

long one_channel_copies(const HamiltonianModel& model, double radius, double delta,
                        const EstimationConstants& k) {
  const double n = k.alpha * model.m() * model.d() * radius * radius / (delta * delta);
  return static_cast<long>(std::ceil(n - 1e-9));
}

long stage_copies(const HamiltonianModel& model, int n, const EstimationConstants& k) {
  // One-channel count at E' = 2 x target, times the (1 + beta n) confidence factor.
  const double base = 4.0 * k.alpha * model.m() * model.d();
  return static_cast<long>(std::ceil(base * (1.0 + k.beta * n) - 1e-9));
}

namespace {

void validate_inputs(const HamiltonianModel& model, const RealVector& theta, double delta,
                     double radius) {
  if (theta.size() != model.m()) throw ValidationError("estimation: theta length differs from m");
  if (!(delta > 0.0)) throw ValidationError("estimation: delta must be positive");
  if (!(radius >= delta)) throw ValidationError("estimation: search radius must be >= delta");
  if (theta.norm() > radius * (1.0 + 1e-12)) {
    throw ValidationError("estimation: ||theta_true|| exceeds the search radius");
  }
}

// Postselects `copies` probes, runs tomography on the accepted ones and
// returns the estimated reduced state. Fills copies/acceptance of `rec`.
Vector sample_reduced_state(const PostselectionOutcome& exact, long copies, int m,
                            const EstimationConstants& k, StageRecord& rec, Rng& rng) {
  std::binomial_distribution<long> accept(copies, std::min(1.0, exact.p_success));
  const long accepted = accept(rng);
  rec.copies = copies;
  rec.acceptance = copies > 0 ? static_cast<double>(accepted) / copies : 0.0;
  if (accepted < m + 1 || rec.acceptance < k.min_acceptance) {
    std::ostringstream msg;
    msg << "postselection starvation: " << accepted << " of " << copies << " copies accepted";
    throw ProcedureError(msg.str());
  }
  return tomography(exact.reduced, accepted, rng);
}

struct StageModel {
  PostselectionFrame frame;
  // Exact probe state for a residual parameter (relative to the prior).
  std::function<Vector(const RealVector&)> probe;
  int channels = 1;
};

StageEstimate run_stage(const HamiltonianModel& model, const RealVector& prior, double tau,
                        long copies,
                        const EstimationConstants& k, Rng& rng,
                        const std::function<StageModel(double)>& build,
                        const std::function<Vector(double)>& actual_probe) {
  StageEstimate out;
  double t = tau;
  for (int attempt = 0;; ++attempt) {
    StageModel stage = build(t);
    StageRecord rec;
    rec.tau = t;
    rec.channels = stage.channels;
    const PostselectionOutcome exact = project_onto_frame(stage.frame, actual_probe(t));
    const Vector estimate = sample_reduced_state(exact, copies, model.m(), k, rec, rng);
    RealVector residual;
    try {
      residual = invert_theta(estimate, t, stage.frame);
    } catch (const InversionUnstableError&) {
      rec.ok = false;
      out.record = rec;
      if (attempt + 1 >= k.max_retries) throw;
      // Time already spent still counts; retry with half the evolution time.
      out.attempts.push_back(rec);
      t *= 0.5;
      continue;
    }
    if (k.refine_steps > 0) {
      auto family = [&](const RealVector& r) {
        return project_onto_frame(stage.frame, stage.probe(r)).reduced;
      };
      residual = refine_theta(estimate, family, residual, k.refine_steps);
    }
    out.theta_hat = prior + residual;
    out.record = rec;
    out.attempts.push_back(rec);
    return out;
  }
}

}  // namespace

StageEstimate adaptive_stage(const HamiltonianModel& model, const RealVector& theta_true,
                             const RealVector& prior, double tau, long copies,
                             const EstimationConstants& k, Rng& rng) {
  const Matrix h_prior = hamiltonian(model, prior);
  auto build = [&](double t) {
    StageModel s;
    s.frame = make_frame(model);
    s.probe = [&model, t](const RealVector& residual) {
      return apply_to_mes(hermitian_expm(hamiltonian(model, residual), t));
    };
    return s;
  };
  auto actual = [&](double t) -> Vector {
    if (!k.trotterize) {
      return apply_to_mes(hermitian_expm(hamiltonian(model, theta_true - prior), t));
    }
    // Feedback field -H_prior simulated by interleaved counter-rotations.
    const Schedule plain = free_evolution(mes(model.d()), 1, t);
    const double bound_h = operator_norm(h_prior) + k.kappa / t;
    const int slices = trotter_slices(t, bound_h, operator_norm(h_prior), 1, k.trotter_tolerance);
    return evolve(model, theta_true, trotterize(plain, 0, h_prior, slices)).amplitudes();
  };
  return run_stage(model, prior, tau, copies, k, rng, build, actual);
}

StageEstimate many_channel_stage(const HamiltonianModel& model, const RealVector& theta_true,
                                 const RealVector& prior, double tau, int r, long copies,
                                 const EstimationConstants& k, Rng& rng) {
  const SymSpace space = occupation_space(model.d(), r);
  const Matrix c_prior = collective(space, hamiltonian(model, prior));
  auto measured = [&](const RealVector& theta, double t) {
    const Matrix c_theta = collective(space, hamiltonian(model, theta));
    return apply_to_mes(hermitian_expm(c_prior, -t) * hermitian_expm(c_theta, t));
  };
  auto build = [&](double t) {
    StageModel s;
    s.frame = make_frame(model, space);
    s.channels = r;
    s.probe = [&measured, &prior, t](const RealVector& residual) {
      return measured(prior + residual, t);
    };
    return s;
  };
  auto actual = [&](double t) { return measured(theta_true, t); };
  return run_stage(model, prior, tau, copies, k, rng, build, actual);
}

namespace {

void finish(EstimationRecord& rec, double delta) {
  rec.error = (rec.theta_hat - rec.theta_true).norm();
  rec.success = rec.error <= delta;
  rec.total_time = 0.0;
  for (const StageRecord& s : rec.stages) {
    rec.total_time += static_cast<double>(s.copies) * s.channels * s.tau;
  }
}

void append_attempts(EstimationRecord& rec, const StageEstimate& est, int n, double radius,
                     const RealVector& theta_true, double target) {
  for (StageRecord s : est.attempts) {
    s.n = n;
    s.radius = radius;
    rec.stages.push_back(s);
  }
  rec.stages.back().ok = (est.theta_hat - theta_true).norm() <= target;
}

struct StagePlan {
  double tau = 0.0;
  long copies = 0;
  int channels = 1;
};

// Staged halving shared by the adaptive and many-channel schemes. `plan`
// gives the resources of stage n; `stage` executes it from a prior.
template <typename PlanFn, typename StageFn>
EstimationRecord run_staged(const HamiltonianModel& model, const RealVector& theta_true,
                            double delta, double radius, const EstimationConstants& k,
                            std::uint64_t seed, PlanFn&& plan, StageFn&& stage) {
  validate_inputs(model, theta_true, delta, radius);
  EstimationRecord rec;
  rec.theta_true = theta_true;
  rec.seed = seed;
  Rng rng(seed);
  const int n0 = stage_count(radius, delta);
  RealVector prior = RealVector::Zero(model.m());
  if (n0 == 0) {
    const double tau = k.kappa / time_scale(model, delta);
    const long copies = one_channel_copies(model, delta, delta, k);
    const StageEstimate est = adaptive_stage(model, theta_true, prior, tau, copies, k, rng);
    append_attempts(rec, est, 0, delta, theta_true, delta);
    rec.theta_hat = est.theta_hat;
    finish(rec, delta);
    return rec;
  }
  for (int n = n0; n >= 1; --n) {
    const double stage_radius = std::ldexp(delta, n);
    const double target = 0.5 * stage_radius;
    const StagePlan p = plan(n, n0);
    try {
      const StageEstimate est = stage(p, prior, rng);
      append_attempts(rec, est, n, stage_radius, theta_true, target);
      prior = est.theta_hat;
    } catch (const Error&) {
      // A failed stage keeps the previous estimate; its copies were spent.
      StageRecord failed;
      failed.n = n;
      failed.radius = stage_radius;
      failed.tau = p.tau;
      failed.copies = p.copies;
      failed.channels = p.channels;
      failed.ok = false;
      rec.stages.push_back(failed);
    }
  }
  rec.theta_hat = prior;
  finish(rec, delta);
  return rec;
}

}  // namespace

EstimationRecord run_one_channel(const HamiltonianModel& model, const RealVector& theta_true,
                                 double delta, double radius, const EstimationConstants& k,
                                 std::uint64_t seed) {
  validate_inputs(model, theta_true, delta, radius);
  if (delta / radius > 0.2 + 1e-12) {
    throw ValidationError("run_one_channel: delta/E must not exceed 1/5");
  }
  EstimationRecord rec;
  rec.theta_true = theta_true;
  rec.seed = seed;
  Rng rng(seed);
  const double tau = k.kappa / time_scale(model, radius);
  const long copies = one_channel_copies(model, radius, delta, k);
  const StageEstimate est =
      adaptive_stage(model, theta_true, RealVector::Zero(model.m()), tau, copies, k, rng);
  append_attempts(rec, est, 0, radius, theta_true, delta);
  rec.theta_hat = est.theta_hat;
  finish(rec, delta);
  return rec;
}

EstimationRecord run_adaptive(const HamiltonianModel& model, const RealVector& theta_true,
                              double delta, double radius, const EstimationConstants& k,
                              std::uint64_t seed) {
  auto plan = [&](int n, int) {
    return StagePlan{k.kappa / time_scale(model, std::ldexp(delta, n)), stage_copies(model, n, k),
                     1};
  };
  auto stage = [&](const StagePlan& p, const RealVector& prior, Rng& rng) {
    return adaptive_stage(model, theta_true, prior, p.tau, p.copies, k, rng);
  };
  return run_staged(model, theta_true, delta, radius, k, seed, plan, stage);
}

EstimationRecord run_many_channel(const HamiltonianModel& model, const RealVector& theta_true,
                                  double delta, double radius, const EstimationConstants& k,
                                  std::uint64_t seed) {
  auto plan = [&](int n, int n0) {
    const int r = std::min(model.d() << (n0 - n), k.channel_cap(model.d()));
    return StagePlan{k.kappa / time_scale(model, std::ldexp(delta, n0)), stage_copies(model, n, k),
                     r};
  };
  auto stage = [&](const StagePlan& p, const RealVector& prior, Rng& rng) {
    return many_channel_stage(model, theta_true, prior, p.tau, p.channels, p.copies, k, rng);
  };
  return run_staged(model, theta_true, delta, radius, k, seed, plan, stage);
}

}  // namespace hamest
