#pragma once

#include <string>

#include "hamest/types.hpp"

namespace hamest {

// Closed-form resource bounds. Order relations are frozen into explicit
// constants: 1/4 in the QCR step and 1/2 in the time bound.

struct BoundConstants {
  double qcr = 0.25;
  double time = 0.5;
  double kappa = 0.3;
  double alpha = 40.0;
  double beta = 1.0;
};

struct QcrChain {
  double trV_lower = 0.0;
  bool tradeoff_ok = false;
};

/// Tr V >= md / (4 N tau^2); the trade-off N tau^2 >= md / (4 delta^2) holds
/// iff delta^2 >= trV_lower.
QcrChain qcr_chain(int m, int d, double delta, double tau, double copies);

/// sqrt(md) / (2 delta).
double time_lower_bound(int m, int d, double delta);

struct NonsphericalBound {
  /// Spherical chain with c in place of m/d: sqrt(c) d / (2 delta).
  double value = 0.0;
  /// The printed form sqrt(c) d / (2 delta^2) (different delta exponent).
  double as_printed = 0.0;
  bool exponent_discrepancy = true;
};

NonsphericalBound nonspherical_time_lower(double c, int d, double delta);

/// Staged one-channel scheme with tau = kappa sqrt(d) / (sqrt(m) E):
/// 4 alpha kappa (1 + 2 beta) m^{3/2} sqrt(d) / delta. Independent of E.
double fewparam_time_upper(int m, int d, double delta, double radius,
                           const BoundConstants& k = {});

/// Staged one-channel scheme with tau = kappa / E: 4 alpha kappa (1 + 2 beta) m d / delta.
double time_upper_general(int m, int d, double delta, const BoundConstants& k = {});

struct BoundReport {
  double qfi_upper = 0.0;
  double copies_lower = 0.0;
  double time_lower = 0.0;
  double time_upper_general = 0.0;
  double time_upper_fewparam = 0.0;
  /// Few-parameter form looser than the general one (prefer the general bound).
  bool fewparam_exceeds_general = false;
  BoundConstants constants_used;
};

BoundReport bound_report(int m, int d, double delta, double radius, double tau,
                         const BoundConstants& k = {});

struct BiasedCramerRao {
  double matrix_bound_trace = 0.0;
  double scalar_bound = 0.0;
};

/// Tr[(I+D) J^{-1} (I+D)^T] / N and (Tr[I+D])^2 / (N Tr J).
BiasedCramerRao biased_cr_rhs(const RealMatrix& j, const RealMatrix& d, double copies);

}  // namespace hamest
