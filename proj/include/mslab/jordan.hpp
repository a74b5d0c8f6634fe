#pragma once

#include "mslab/commutant.hpp"

namespace mslab {

/// Elementary factor B(z) = I - P + b_zero(z) P with P = v v*.
class PotapovFactor {
public:
  PotapovFactor(cplx zero, Vector direction);

  cplx zero() const { return zero_; }
  /// Unit generating vector of the projection.
  const Vector& direction() const { return direction_; }
  Matrix projection() const { return direction_ * direction_.adjoint(); }
  Eigen::Index size() const { return direction_.size(); }
  Matrix operator()(cplx z) const;

private:
  cplx zero_;
  Vector direction_;
};

/// Theta(z) = B_1(z) ... B_k(z) U.
class MatrixInnerFunction {
public:
  MatrixInnerFunction(std::vector<PotapovFactor> factors, Matrix constant, const Tolerances& tol = {});

  Eigen::Index size() const { return constant_.rows(); }
  const std::vector<PotapovFactor>& factors() const { return factors_; }
  const Matrix& constant() const { return constant_; }
  Matrix operator()(cplx z) const;
  /// det Theta as a scalar inner function (known by construction).
  InnerFunction determinant() const;
  /// Numerator matrix polynomial entries: Theta = numerator / prod(1 - conj(a) z).
  std::vector<std::vector<Polynomial>> numerator() const;
  Polynomial common_denominator() const;

private:
  std::vector<PotapovFactor> factors_;
  Matrix constant_;
};

MatrixInnerFunction potapov_product(std::vector<PotapovFactor> factors, Matrix constant,
                                    const Tolerances& tol = {});

/// All k x k minors, rows and columns in lexicographic order.
std::vector<RationalFunction> minors_order(const MatrixInnerFunction& theta, int k);

/// det Theta divided by the greatest common inner divisor of the minors of
/// order N - 1.
InnerFunction minimal_function_from_theta(const MatrixInnerFunction& theta, const Tolerances& tol = {});

/// Compressed shift on K^2(Theta) in an orthonormal basis.
Operator model_operator(const MatrixInnerFunction& theta, const Tolerances& tol = {});

struct JordanModel {
  std::vector<InnerFunction> functions;
};

JordanModel jordan_model(const Operator& t, const RootSet& spectrum_hint, const Tolerances& tol = {});

/// Dimension of the smallest invariant subspace containing the columns of v.
int generated_dimension(const Matrix& t, const Matrix& v, double rel = 1e-8);

struct MultiplicityResult {
  int value = 0;
  /// Randomized generator search agreed: value random vectors generate the
  /// whole space in every trial and value - 1 never do.
  bool generator_check = false;
};

MultiplicityResult multiplicity(const Operator& t, const RootSet& spectrum_hint, std::uint64_t seed = 0x6d75,
                                const Tolerances& tol = {});

struct QuasiSimilarityWitness {
  Operator x;  // T X = X S
  Operator y;  // S Y = Y T
  int draws = 0;
};

QuasiSimilarityWitness quasi_similarity_witness(const Operator& t, const JordanModel& j, std::uint64_t seed = 0x7173,
                                                const Tolerances& tol = {});

/// Similar strict contraction L* T L^{-*}, where P = L L* solves
/// P - T* P T = I. Requires spectral radius < 1.
Matrix stein_contraction(const Matrix& t);

}  // namespace mslab
