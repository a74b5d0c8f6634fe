#pragma once

#include <span>
#include <string>
#include <vector>

#include "mslab/inner.hpp"
#include "mslab/linalg.hpp"

namespace mslab {

/// Number of uniform circle nodes used for every inner product.
inline constexpr int kQuadratureNodes = 2048;

/// Quadrature nodes e^{2 pi i k / 2048}, shared by all model spaces.
const Vector& quadrature_nodes();

struct SpaceDescriptor {
  std::string label;
  Eigen::Index dimension = 0;

  bool operator==(const SpaceDescriptor&) const = default;
};

/// Dense matrix of a linear map between finite-dimensional spaces. Column j
/// holds the image of the j-th source basis vector.
class Operator {
public:
  Operator() = default;
  Operator(Matrix matrix, SpaceDescriptor source, SpaceDescriptor target);
  /// Square operator on C^n with a plain label.
  static Operator on(Matrix matrix, std::string label = "C^n");

  const Matrix& matrix() const { return matrix_; }
  const SpaceDescriptor& source() const { return source_; }
  const SpaceDescriptor& target() const { return target_; }
  Eigen::Index rows() const { return matrix_.rows(); }
  Eigen::Index cols() const { return matrix_.cols(); }
  bool square() const { return matrix_.rows() == matrix_.cols(); }

private:
  Matrix matrix_;
  SpaceDescriptor source_;
  SpaceDescriptor target_;
};

/// K^2_u = H^2 minus u H^2 for a finite Blaschke product u, with the
/// Takenaka-Malmquist basis built on u's zeros in storage order.
class ModelSpace {
public:
  explicit ModelSpace(InnerFunction u);

  const InnerFunction& inner() const { return u_; }
  int dimension() const { return static_cast<int>(zeros_.size()); }
  const std::vector<cplx>& basis_zeros() const { return zeros_; }
  SpaceDescriptor descriptor() const;

  /// Basis functions sampled at the quadrature nodes, one column each.
  const Matrix& basis_samples() const { return samples_; }

private:
  InnerFunction u_;
  std::vector<cplx> zeros_;
  Matrix samples_;
};

/// Direct sum of model spaces; dimension is the sum of the parts.
struct DirectSumSpace {
  std::vector<ModelSpace> summands;

  int dimension() const;
  SpaceDescriptor descriptor() const;
};

/// e_j(z) = sqrt(1 - |a_j|^2) / (1 - conj(a_j) z) * prod_{i<j} b_{a_i}(z),
/// with j zero-based.
cplx tm_basis_eval(const ModelSpace& space, int j, cplx z);

/// Coefficients <f, e_j> by circle quadrature. f must be analytic on the
/// closed disk (ErrorKind::not_in_hardy otherwise).
Vector project(const ModelSpace& space, const RationalFunction& f, const Tolerances& tol = {});

/// Closed-form matrix of S_u = P_u S restricted to K^2_u in the TM basis.
Operator compressed_shift(const ModelSpace& space);

/// Same operator assembled column by column from project(space, z e_j).
Operator compressed_shift_by_projection(const ModelSpace& space);

/// Coefficients of the reproducing kernel k_w: c_j = conj(e_j(w)).
Vector kernel_vector(const ModelSpace& space, cplx w);

/// Matrix of f -> P_target(factor * f) from `source` into `target`.
Operator multiplication_operator(const ModelSpace& source, const InnerFunction& factor,
                                 const ModelSpace& target);

/// R h = q h from K^2_m into K^2_{mq}; an isometry onto qH^2 minus mqH^2.
Operator embed_R(const InnerFunction& m, const InnerFunction& q, const Tolerances& tol = {});

/// Q = R^* q(S_{mq}) from K^2_{mq} onto K^2_m, intertwining S_{mq} and S_m.
Operator quotient_Q(const InnerFunction& m, const InnerFunction& q, const Tolerances& tol = {});

/// Block-diagonal sum of square operators.
Operator direct_sum(std::span<const Operator> ops);

/// S(u_1) + ... + S(u_k) on the direct sum of the model spaces.
Operator jordan_operator(std::span<const InnerFunction> functions);

}  // namespace mslab
