#include "mslab/modelspace.hpp"

#include <cmath>

namespace mslab {

const Vector& quadrature_nodes() {
  static const Vector nodes = circle_points(kQuadratureNodes);
  return nodes;
}

Operator::Operator(Matrix matrix, SpaceDescriptor source, SpaceDescriptor target)
    : matrix_(std::move(matrix)), source_(std::move(source)), target_(std::move(target)) {
  if (matrix_.cols() != source_.dimension || matrix_.rows() != target_.dimension)
    throw Error(ErrorKind::size_mismatch, "operator matrix does not match its space descriptors");
}

Operator Operator::on(Matrix matrix, std::string label) {
  if (matrix.rows() != matrix.cols())
    throw Error(ErrorKind::size_mismatch, "Operator::on needs a square matrix");
  SpaceDescriptor space{std::move(label), matrix.rows()};
  return Operator(std::move(matrix), space, space);
}

ModelSpace::ModelSpace(InnerFunction u) : u_(std::move(u)), zeros_(u_.expanded_zeros()) {
  const Vector& nodes = quadrature_nodes();
  samples_.resize(kQuadratureNodes, dimension());
  for (int k = 0; k < kQuadratureNodes; ++k) {
    const cplx z = nodes[k];
    cplx prefix = 1.0;
    for (int j = 0; j < dimension(); ++j) {
      const cplx a = zeros_[static_cast<std::size_t>(j)];
      const cplx den = 1.0 - std::conj(a) * z;
      samples_(k, j) = prefix * std::sqrt(1.0 - std::norm(a)) / den;
      prefix *= (z - a) / den;
    }
  }
}

SpaceDescriptor ModelSpace::descriptor() const {
  return {"K2(deg=" + std::to_string(dimension()) + ")", dimension()};
}

int DirectSumSpace::dimension() const {
  int d = 0;
  for (const auto& s : summands) d += s.dimension();
  return d;
}

SpaceDescriptor DirectSumSpace::descriptor() const {
  std::string label;
  for (const auto& s : summands) label += (label.empty() ? "" : "+") + s.descriptor().label;
  return {label.empty() ? "0" : label, dimension()};
}

cplx tm_basis_eval(const ModelSpace& space, int j, cplx z) {
  if (j < 0 || j >= space.dimension())
    throw Error(ErrorKind::index_out_of_range, "tm_basis_eval: basis index out of range");
  const auto& zs = space.basis_zeros();
  cplx prefix = 1.0;
  for (int i = 0; i < j; ++i) {
    const cplx a = zs[static_cast<std::size_t>(i)];
    prefix *= (z - a) / (1.0 - std::conj(a) * z);
  }
  const cplx a = zs[static_cast<std::size_t>(j)];
  const cplx den = 1.0 - std::conj(a) * z;
  if (std::abs(den) <= std::numeric_limits<double>::epsilon())
    throw Error(ErrorKind::pole, "tm_basis_eval at a pole");
  return prefix * std::sqrt(1.0 - std::norm(a)) / den;
}

Vector project(const ModelSpace& space, const RationalFunction& f, const Tolerances& tol) {
  if (!f.analytic_on_closed_disk(tol))
    throw Error(ErrorKind::not_in_hardy, "project: function has a pole on or inside the unit circle");
  const Vector& nodes = quadrature_nodes();
  Vector values(kQuadratureNodes);
  for (int k = 0; k < kQuadratureNodes; ++k) values[k] = f(nodes[k]);
  return space.basis_samples().adjoint() * values / static_cast<double>(kQuadratureNodes);
}

Operator compressed_shift(const ModelSpace& space) {
  const int n = space.dimension();
  const auto& a = space.basis_zeros();
  Matrix s = Matrix::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    s(j, j) = a[static_cast<std::size_t>(j)];
    const double wj = std::sqrt(1.0 - std::norm(a[static_cast<std::size_t>(j)]));
    cplx chain = 1.0;
    for (int i = j + 1; i < n; ++i) {
      const double wi = std::sqrt(1.0 - std::norm(a[static_cast<std::size_t>(i)]));
      s(i, j) = wi * wj * chain;
      chain *= -std::conj(a[static_cast<std::size_t>(i)]);
    }
  }
  const auto d = space.descriptor();
  return Operator(std::move(s), d, d);
}

Operator compressed_shift_by_projection(const ModelSpace& space) {
  const Matrix& e = space.basis_samples();
  const Matrix shifted = quadrature_nodes().asDiagonal() * e;
  Matrix s = e.adjoint() * shifted / static_cast<double>(kQuadratureNodes);
  const auto d = space.descriptor();
  return Operator(std::move(s), d, d);
}

Vector kernel_vector(const ModelSpace& space, cplx w) {
  if (!(std::abs(w) < 1.0)) throw Error(ErrorKind::out_of_disk, "kernel_vector: |w| must be < 1");
  Vector c(space.dimension());
  for (int j = 0; j < space.dimension(); ++j) c[j] = std::conj(tm_basis_eval(space, j, w));
  return c;
}

Operator multiplication_operator(const ModelSpace& source, const InnerFunction& factor,
                                 const ModelSpace& target) {
  const Vector& nodes = quadrature_nodes();
  Vector weight(kQuadratureNodes);
  for (int k = 0; k < kQuadratureNodes; ++k) weight[k] = inner_eval(factor, nodes[k]);
  Matrix m = target.basis_samples().adjoint() * (weight.asDiagonal() * source.basis_samples()) /
             static_cast<double>(kQuadratureNodes);
  return Operator(std::move(m), source.descriptor(), target.descriptor());
}

Operator embed_R(const InnerFunction& m, const InnerFunction& q, const Tolerances& tol) {
  const ModelSpace small(m);
  const ModelSpace big(inner_mul(m, q, tol));
  return multiplication_operator(small, q, big);
}

Operator quotient_Q(const InnerFunction& m, const InnerFunction& q, const Tolerances& tol) {
  const ModelSpace small(m);
  const ModelSpace big(inner_mul(m, q, tol));
  const Matrix r = multiplication_operator(small, q, big).matrix();
  const Matrix q_of_shift = rational_of_matrix(q.to_rational(), compressed_shift(big).matrix());
  return Operator(r.adjoint() * q_of_shift, big.descriptor(), small.descriptor());
}

Operator direct_sum(std::span<const Operator> ops) {
  Eigen::Index n = 0;
  std::string label;
  for (const auto& op : ops) {
    if (!op.square()) throw Error(ErrorKind::size_mismatch, "direct_sum: summand is not square");
    n += op.rows();
    label += (label.empty() ? "" : "+") + op.source().label;
  }
  Matrix m = Matrix::Zero(n, n);
  Eigen::Index at = 0;
  for (const auto& op : ops) {
    m.block(at, at, op.rows(), op.cols()) = op.matrix();
    at += op.rows();
  }
  SpaceDescriptor d{label.empty() ? "0" : label, n};
  return Operator(std::move(m), d, d);
}

Operator jordan_operator(std::span<const InnerFunction> functions) {
  std::vector<Operator> parts;
  parts.reserve(functions.size());
  for (const auto& u : functions) parts.push_back(compressed_shift(ModelSpace(u)));
  return direct_sum(parts);
}

}  // namespace mslab
