#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace hamest {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Rng = std::mt19937_64;

inline constexpr Complex kI{0.0, 1.0};

// Single place for every numerical tolerance shared by library and tests.
struct Tolerances {
  double hermitian = 1e-12;   // relative to max(1, max |entry|)
  double traceless = 1e-12;
  double generator_traceless = 1e-10;
  double unitary = 1e-10;
  double norm = 1e-10;
  double branch_cut = 1e-8;
  double gram = 1e-8;
  double sphericity = 1e-8;
  double frame_gram = 1e-9;
  double qfi_relative_slack = 1e-4;
  double qfi_absolute_floor = 1e-9;
  double growth_slack = 1e-3;
  double growth_absolute_floor = 1e-6;
  double min_postselection = 1e-12;
  double min_reference_amplitude = 0.1;
  double fd_step = 1e-5;
};

inline constexpr Tolerances kTol{};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input: shape mismatch, non-Hermitian matrix, invalid parameter.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Requested tensor or symmetric space exceeds the memory guard.
class ResourceError : public Error {
 public:
  using Error::Error;
};

// Unitary with an eigenphase on the principal-log branch cut.
class BranchCutError : public Error {
 public:
  using Error::Error;
};

// Postselection onto a subspace the state (numerically) does not overlap.
class DegenerateProjectionError : public Error {
 public:
  using Error::Error;
};

// Reference amplitude too small for first-order parameter inversion.
class InversionUnstableError : public Error {
 public:
  using Error::Error;
};

// An estimation procedure could not complete (e.g. postselection starvation).
class ProcedureError : public Error {
 public:
  using Error::Error;
};

}  // namespace hamest
