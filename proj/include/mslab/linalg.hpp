#pragma once

#include <cstdint>
#include <random>

#include "mslab/rational.hpp"

namespace mslab {

struct SvdResult {
  Eigen::VectorXd values;  // descending
  Matrix u;
  Matrix v;
};

/// One-sided Jacobi SVD (QR-preconditioned for tall inputs). Used for every
/// rank and null-space decision: it keeps singular vectors accurate inside
/// clusters of equal singular values, where the complex divide-and-conquer
/// solver is not reliable. `options` takes Eigen's Compute{Thin,Full}{U,V}
/// flags.
SvdResult svd(const Matrix& a, unsigned options = 0);

/// Rank from descending singular values: those below rel * max(sv[0], floor)
/// are zero, allowing for the n * eps * sigma_max accuracy of computed
/// singular values at the threshold.
int rank_of_singular_values(const Eigen::VectorXd& sv, double rel, double floor = 0.0);

/// Number of singular values not below rel * sigma_max (0 for the zero matrix).
int numerical_rank(const Matrix& a, double rel);

/// Number of singular values above rel * max(sigma_max, floor). Used where
/// an exactly zero matrix must have rank 0 despite rounding noise.
int numerical_rank_floor(const Matrix& a, double rel, double floor);

/// Orthonormal basis (columns) of the null space of `a`, with the same
/// relative rank decision as numerical_rank. A positive `floor` puts a lower
/// bound on the scale the threshold is relative to, so a map that is zero up
/// to rounding gets rank 0.
Matrix null_space(const Matrix& a, double rel, double floor = 0.0);

/// Orthonormal basis (columns) of the column space of `a`.
Matrix range_basis(const Matrix& a, double rel);

double spectral_norm(const Matrix& a);
double spectral_radius(const Matrix& a);

/// Smallest over largest singular value; 0 for the zero matrix.
double singular_ratio(const Matrix& a);

/// Solves a x = b by partial-pivot LU with one step of residual
/// refinement. Throws ErrorKind::near_pole when the refined relative
/// residual exceeds 1e-6 or the factorization is singular.
Matrix solve_refined(const Matrix& a, const Matrix& b);

Matrix poly_of_matrix(const Polynomial& p, const Matrix& t);

/// numerator(T) * denominator(T)^{-1}.
Matrix rational_of_matrix(const RationalFunction& h, const Matrix& t);

/// vec(X) column-major; column k of the result is vec of basis matrix k.
Vector vectorize(const Matrix& m);
Matrix unvectorize(const Eigen::Ref<const Vector>& v, Eigen::Index rows, Eigen::Index cols);

/// Deterministic generator. Floating-point draws are built from raw 64-bit
/// output so sequences are identical across standard libraries.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Seed derived from a base seed and any number of stream labels.
  static std::uint64_t mix(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

  double uniform();  // [0, 1)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int uniform_int(int lo, int hi);  // inclusive
  double normal();
  cplx complex_normal();
  /// Uniform in the disk of the given radius.
  cplx in_disk(double radius);
  Matrix gaussian(Eigen::Index rows, Eigen::Index cols);
  Matrix unitary(Eigen::Index n);
  Vector unit_vector(Eigen::Index n);

private:
  std::mt19937_64 engine_;
};

}  // namespace mslab
