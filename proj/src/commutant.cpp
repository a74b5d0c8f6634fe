#include "mslab/commutant.hpp"

namespace mslab {

namespace {

/// Matrix of vec(X) -> vec(T2 X - X T1), X of size n2 x n1.
Matrix sylvester_matrix(const Matrix& t1, const Matrix& t2) {
  const Eigen::Index n1 = t1.rows();
  const Eigen::Index n2 = t2.rows();
  Matrix k = Matrix::Zero(n1 * n2, n1 * n2);
  // I (x) T2 - T1^T (x) I.
  for (Eigen::Index j = 0; j < n1; ++j) k.block(j * n2, j * n2, n2, n2) = t2;
  for (Eigen::Index i = 0; i < n1; ++i)
    for (Eigen::Index j = 0; j < n1; ++j)
      if (t1(j, i) != cplx{}) k.block(i * n2, j * n2, n2, n2).diagonal().array() -= t1(j, i);
  return k;
}

OperatorSpaceBasis from_columns(const Matrix& cols, Eigen::Index rows, Eigen::Index colsz,
                                const SpaceDescriptor& source, const SpaceDescriptor& target) {
  OperatorSpaceBasis out;
  for (Eigen::Index c = 0; c < cols.cols(); ++c)
    out.basis.emplace_back(unvectorize(cols.col(c), rows, colsz), source, target);
  return out;
}

}  // namespace

Matrix OperatorSpaceBasis::stacked() const {
  if (basis.empty()) return Matrix(0, 0);
  Matrix out(basis.front().matrix().size(), dimension());
  for (int k = 0; k < dimension(); ++k) out.col(k) = vectorize(basis[static_cast<std::size_t>(k)].matrix());
  return out;
}

double OperatorSpaceBasis::span_residual(const Matrix& a) const {
  const Vector v = vectorize(a);
  if (basis.empty()) return v.norm();
  const Matrix q = stacked();
  return (v - q * (q.adjoint() * v)).norm();
}

OperatorSpaceBasis intertwiner_space(const Operator& t1, const Operator& t2, const Tolerances& tol) {
  if (!t1.square() || !t2.square())
    throw Error(ErrorKind::size_mismatch, "intertwiner_space: operators must be square");
  const Matrix k = sylvester_matrix(t1.matrix(), t2.matrix());
  // The map's scale is set by the operators, not by the map itself.
  const double floor = spectral_norm(t1.matrix()) + spectral_norm(t2.matrix());
  const Matrix ns = null_space(k, tol.rank, floor);
  return from_columns(ns, t2.rows(), t1.rows(), t1.source(), t2.target());
}

OperatorSpaceBasis commutant_of_set(std::span<const Operator> set, const Tolerances& tol) {
  if (set.empty()) throw Error(ErrorKind::invalid_input, "commutant_of_set: empty set");
  const Eigen::Index n = set.front().rows();
  for (const auto& w : set)
    if (!w.square() || w.rows() != n)
      throw Error(ErrorKind::size_mismatch, "commutant_of_set: operators must share one square space");
  const Eigen::Index n2 = n * n;

  // Stack the Sylvester blocks, compressing to an n^2 x n^2 triangular
  // factor whenever the buffer grows; the null space is unchanged.
  Matrix buffer(0, n2);
  double floor = 0.0;
  for (const auto& w : set) {
    floor = std::max(floor, 2.0 * spectral_norm(w.matrix()));
    const Matrix k = sylvester_matrix(w.matrix(), w.matrix());
    Matrix grown(buffer.rows() + k.rows(), n2);
    grown << buffer, k;
    buffer = std::move(grown);
    if (buffer.rows() > 3 * n2) {
      Eigen::HouseholderQR<Matrix> qr(buffer);
      buffer = qr.matrixQR().topRows(n2).triangularView<Eigen::Upper>();
    }
  }
  const Matrix ns = null_space(buffer, tol.rank, floor);
  return from_columns(ns, n, n, set.front().source(), set.front().target());
}

OperatorSpaceBasis commutant_basis(const Operator& t, const Tolerances& tol) {
  return intertwiner_space(t, t, tol);
}

OperatorSpaceBasis bicommutant_basis(const Operator& t, const Tolerances& tol) {
  const OperatorSpaceBasis c = commutant_basis(t, tol);
  return commutant_of_set(c.basis, tol);
}

CalculusMatch match_calculus(const Operator& a, const Operator& t, const InnerFunction& m, const Tolerances& tol,
                             const OperatorSpaceBasis* commutant) {
  if (!t.square() || a.rows() != t.rows() || a.cols() != t.cols())
    throw Error(ErrorKind::size_mismatch, "match_calculus: A and T must act on the same space");
  const Matrix& am = a.matrix();
  const Matrix& tm = t.matrix();
  if (commutant != nullptr) {
    const double scale = std::max(1.0, am.norm());
    for (const auto& w : commutant->basis)
      if ((am * w.matrix() - w.matrix() * am).norm() > tol.op * scale * std::max<double>(1.0, static_cast<double>(tm.rows())))
        throw Error(ErrorKind::invalid_input, "match_calculus: A is not in the bicommutant of T");
  }

  const int d = m.degree();
  if (d == 0) {
    const double residual = am.norm();
    if (residual > tol.match) throw Error(ErrorKind::match_failure, "match_calculus: T acts on a zero space");
    return {Polynomial{}, residual};
  }
  Matrix design(am.size(), d);
  Matrix power = Matrix::Identity(tm.rows(), tm.cols());
  for (int k = 0; k < d; ++k) {
    design.col(k) = vectorize(power);
    power = power * tm;
  }
  const Vector target = vectorize(am);
  const Vector coef = design.colPivHouseholderQr().solve(target);
  const double residual = (design * coef - target).norm();
  if (residual > tol.match) {
    throw Error(ErrorKind::match_failure,
                "match_calculus: bicommutant element is not a function of T (residual " + std::to_string(residual) + ")");
  }
  return {Polynomial(std::vector<cplx>(coef.data(), coef.data() + coef.size())), residual};
}

bool quasi_affinity_check(const Operator& x, const Tolerances& tol) {
  if (x.rows() != x.cols()) return false;
  if (x.rows() == 0) return true;
  return numerical_rank(x.matrix(), tol.rank) == x.rows();
}

}  // namespace mslab
