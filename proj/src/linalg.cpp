#include "mslab/linalg.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace mslab {

namespace {

Eigen::VectorXd singular_values(const Matrix& a) {
  if (a.size() == 0) return {};
  return svd(a).values;
}

/// Singular values below rel * top are zero. Computed singular values carry
/// an absolute error of order n * eps * sigma_max, so values within that
/// band of the threshold are not "below" it; exact ties then resolve the
/// same way regardless of rounding.
int rank_from(const Eigen::VectorXd& sv, double rel, double floor) {
  const double top = sv.size() == 0 ? 0.0 : std::max(sv[0], floor);
  if (top == 0.0) return 0;
  const double band = 16.0 * static_cast<double>(sv.size()) * std::numeric_limits<double>::epsilon() * top;
  int r = 0;
  while (r < sv.size() && sv[r] >= rel * top - band) ++r;
  return r;
}

}  // namespace

SvdResult svd(const Matrix& a, unsigned options) {
  SvdResult out;
  Eigen::JacobiSVD<Matrix> jac(a, options);
  out.values = jac.singularValues();
  if (options & (Eigen::ComputeThinU | Eigen::ComputeFullU)) out.u = jac.matrixU();
  if (options & (Eigen::ComputeThinV | Eigen::ComputeFullV)) out.v = jac.matrixV();
  if (!out.values.allFinite()) throw Error(ErrorKind::numerical_failure, "svd: non-finite singular values");
  return out;
}

}  // namespace mslab

namespace mslab {

int rank_of_singular_values(const Eigen::VectorXd& sv, double rel, double floor) {
  return rank_from(sv, rel, floor);
}

int numerical_rank(const Matrix& a, double rel) { return rank_from(singular_values(a), rel, 0.0); }

int numerical_rank_floor(const Matrix& a, double rel, double floor) {
  return rank_from(singular_values(a), rel, floor);
}

Matrix null_space(const Matrix& a, double rel, double floor) {
  const Eigen::Index n = a.cols();
  if (n == 0) return Matrix(0, 0);
  if (a.rows() == 0) return Matrix::Identity(n, n);
  // Tall inputs are compressed to their R factor first; singular values and
  // right singular vectors are unchanged.
  Matrix work = a;
  if (a.rows() > 2 * n) {
    Eigen::HouseholderQR<Matrix> qr(a);
    work = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
  }
  const SvdResult d = svd(work, Eigen::ComputeFullV);
  const int r = rank_from(d.values, rel, floor);
  return d.v.rightCols(n - r);
}

Matrix range_basis(const Matrix& a, double rel) {
  if (a.size() == 0) return Matrix(a.rows(), 0);
  const SvdResult d = svd(a, Eigen::ComputeThinU);
  const int r = rank_from(d.values, rel, 0.0);
  return d.u.leftCols(r);
}

double spectral_norm(const Matrix& a) {
  const auto sv = singular_values(a);
  return sv.size() == 0 ? 0.0 : sv[0];
}

double spectral_radius(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::ComplexEigenSolver<Matrix> es(a, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

double singular_ratio(const Matrix& a) {
  const auto sv = singular_values(a);
  if (sv.size() == 0 || sv[0] == 0.0) return 0.0;
  return sv[sv.size() - 1] / sv[0];
}

Matrix solve_refined(const Matrix& a, const Matrix& b) {
  Eigen::PartialPivLU<Matrix> lu(a);
  Matrix x = lu.solve(b);
  const Matrix r = b - a * x;
  x += lu.solve(r);
  const double scale = a.norm() * x.norm() + b.norm();
  const double residual = (b - a * x).norm();
  if (!x.allFinite() || (scale > 0.0 && residual > 1e-6 * scale))
    throw Error(ErrorKind::near_pole, "linear solve failed: matrix numerically singular");
  return x;
}

Matrix poly_of_matrix(const Polynomial& p, const Matrix& t) {
  const Eigen::Index n = t.rows();
  Matrix acc = Matrix::Zero(n, n);
  for (int k = p.degree(); k >= 0; --k) {
    acc = acc * t;
    acc.diagonal().array() += p[k];
  }
  return acc;
}

Matrix rational_of_matrix(const RationalFunction& h, const Matrix& t) {
  const Matrix num = poly_of_matrix(h.numerator(), t);
  if (h.denominator().degree() == 0) return num / h.denominator()[0];
  const Matrix den = poly_of_matrix(h.denominator(), t);
  // num and den commute, so num * den^{-1} = den^{-1} * num.
  return solve_refined(den, num);
}

Vector vectorize(const Matrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }

Matrix unvectorize(const Eigen::Ref<const Vector>& v, Eigen::Index rows, Eigen::Index cols) {
  Matrix out(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) out(i, j) = v[j * rows + i];
  return out;
}

std::uint64_t Rng::mix(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  // splitmix64 finalizer over the combined words
  auto fin = [](std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  };
  return fin(fin(fin(seed) ^ a) ^ b);
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

int Rng::uniform_int(int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<int>(engine_() % span);
}

double Rng::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

cplx Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

cplx Rng::in_disk(double radius) {
  const double r = radius * std::sqrt(uniform());
  const double theta = 2.0 * std::numbers::pi * uniform();
  return std::polar(r, theta);
}

Matrix Rng::gaussian(Eigen::Index rows, Eigen::Index cols) {
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = complex_normal();
  return m;
}

Matrix Rng::unitary(Eigen::Index n) {
  Eigen::HouseholderQR<Matrix> qr(gaussian(n, n));
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR();
  // Fix column phases so the distribution is Haar.
  for (Eigen::Index j = 0; j < n; ++j) {
    const cplx d = r(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

Vector Rng::unit_vector(Eigen::Index n) {
  Vector v = gaussian(n, 1).col(0);
  return v / v.norm();
}

}  // namespace mslab
