#pragma once

#include "mslab/calculus.hpp"

namespace mslab {

/// Frobenius-orthonormal basis of a space of operators on a common space.
struct OperatorSpaceBasis {
  std::vector<Operator> basis;
  int dimension() const { return static_cast<int>(basis.size()); }
  /// Basis matrices as columns of vec(X), column-major.
  Matrix stacked() const;
  /// Distance from `a` to the span, in Frobenius norm.
  double span_residual(const Matrix& a) const;
};

/// {X : T2 X = X T1} as the null space of the vectorized Sylvester map.
OperatorSpaceBasis intertwiner_space(const Operator& t1, const Operator& t2, const Tolerances& tol = {});

/// {X : X W = W X for every W in `set`}; all operators share one square space.
OperatorSpaceBasis commutant_of_set(std::span<const Operator> set, const Tolerances& tol = {});

OperatorSpaceBasis commutant_basis(const Operator& t, const Tolerances& tol = {});
OperatorSpaceBasis bicommutant_basis(const Operator& t, const Tolerances& tol = {});

struct CalculusMatch {
  Polynomial p;
  double residual = 0.0;
};

/// Least-squares fit A ~ p(T) in the monomials I, T, ..., T^{deg m - 1}.
/// Throws match_failure when the Frobenius residual exceeds tol.match.
/// When `commutant` is given, A is first checked to commute with it.
CalculusMatch match_calculus(const Operator& a, const Operator& t, const InnerFunction& m,
                             const Tolerances& tol = {}, const OperatorSpaceBasis* commutant = nullptr);

/// At finite dimension a quasi-affinity is an invertible operator.
bool quasi_affinity_check(const Operator& x, const Tolerances& tol = {});

}  // namespace mslab
