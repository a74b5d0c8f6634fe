#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace mslab {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Numerical thresholds shared by every module.
///
/// All rank decisions, zero pairings and residual checks read from one of
/// these, so a study can vary a single value and see every dependent
/// decision move together.
struct Tolerances {
  double pair = 1e-7;    // zero/root pairing (absolute)
  double rank = 1e-8;    // singular values below rank * sigma_max are zero
  double op = 1e-8;      // operator identities (Frobenius)
  double gram = 1e-8;    // basis orthonormality
  double eval = 1e-9;    // pointwise function identities
  double fr = 1e-8;      // spectral factorization residual
  double match = 1e-7;   // least-squares calculus matching (Frobenius, absolute)
  double root = 1e-9;    // |p(root)| relative to the largest coefficient
  double annihilate = 1e-9;  // ||m(T)|| for a minimal function
  double lemma = 1e-9;       // embedding/quotient intertwining identities
  double kernel = 1e-8;      // subspace distances between kernels and ranges
  double oracle = 1e-8;      // closed-form shift vs quadrature oracle
  double span = 1e-7;        // bicommutant span residual, relative to max(1, ||A||)

  /// Sets a tolerance by its short name (see names()). Accepts an optional
  /// "tol_" prefix.
  void set(std::string_view name, double value);
  double get(std::string_view name) const;
  static const std::vector<std::string>& names();
};

enum class ErrorKind {
  degenerate_input,
  numerical_failure,
  not_factorable,
  pole,
  divisibility,
  boundary_zero,
  not_in_hardy,
  index_out_of_range,
  out_of_disk,
  near_pole,
  not_applicable,
  not_c0,
  invalid_input,
  interpolation_undefined,
  match_failure,
  spanning_failure,
  witness_failure,
  size_mismatch,
  io,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

/// Uniform samples e^{2 pi i k / count} on the unit circle.
Vector circle_points(int count);

}  // namespace mslab
