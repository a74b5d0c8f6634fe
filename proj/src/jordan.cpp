#include "mslab/jordan.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <limits>
#include <optional>

namespace mslab {

namespace {

constexpr int kUnitarySamples = 64;
constexpr int kKernelAngles = 8;
constexpr double kKernelRadii[] = {0.3, 0.6};
constexpr int kWitnessDraws = 64;
constexpr int kGeneratorTrials = 32;
/// A local Taylor coefficient is zero when it is below this fraction of the
/// accumulated magnitude of the terms that produced it.
constexpr double kMinorVanishing = 1e-10;
/// A minor of a unitary-on-the-circle matrix is bounded by 1 there; below
/// this it is treated as identically zero.
constexpr double kZeroMinor = 1e-10;

using PolyMatrix = std::vector<std::vector<Polynomial>>;

Matrix identity(Eigen::Index n) { return Matrix::Identity(n, n); }

Polynomial poly_det(const PolyMatrix& m) {
  const std::size_t n = m.size();
  if (n == 0) return Polynomial{1.0};
  if (n == 1) return m[0][0];
  Polynomial acc;
  for (std::size_t j = 0; j < n; ++j) {
    if (m[0][j].is_zero()) continue;
    PolyMatrix sub;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<Polynomial> row;
      for (std::size_t c = 0; c < n; ++c)
        if (c != j) row.push_back(m[i][c]);
      sub.push_back(std::move(row));
    }
    const Polynomial term = m[0][j] * poly_det(sub);
    acc = (j % 2 == 0) ? acc + term : acc - term;
  }
  return acc;
}

std::vector<std::vector<std::size_t>> combinations(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> pick(k);
  std::iota(pick.begin(), pick.end(), 0);
  if (k > n) return out;
  for (;;) {
    out.push_back(pick);
    std::size_t i = k;
    while (i > 0 && pick[i - 1] == n - k + i - 1) --i;
    if (i == 0) return out;
    ++pick[i - 1];
    for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }
}

Operator empty_operator(const std::string& label) { return Operator(Matrix(0, 0), {label, 0}, {label, 0}); }

/// Truncated Taylor series at a point, with a parallel series of
/// nonnegative magnitudes: bound[k] is the sum of |terms| that were added
/// into value[k], which is the scale of its rounding error.
struct ScalarSeries {
  std::vector<cplx> value;
  std::vector<double> bound;
};

struct MatrixSeries {
  std::vector<Matrix> value;
  std::vector<Eigen::MatrixXd> bound;
};

ScalarSeries series_mul(const ScalarSeries& a, const ScalarSeries& b, std::size_t order) {
  ScalarSeries out{std::vector<cplx>(order, cplx{}), std::vector<double>(order, 0.0)};
  for (std::size_t i = 0; i < order; ++i)
    for (std::size_t j = 0; i + j < order; ++j) {
      out.value[i + j] += a.value[i] * b.value[j];
      out.bound[i + j] += a.bound[i] * b.bound[j];
    }
  return out;
}

MatrixSeries series_mul(const MatrixSeries& a, const MatrixSeries& b, std::size_t order) {
  const Eigen::Index n = a.value[0].rows();
  MatrixSeries out{std::vector<Matrix>(order, Matrix::Zero(n, n)),
                   std::vector<Eigen::MatrixXd>(order, Eigen::MatrixXd::Zero(n, n))};
  for (std::size_t i = 0; i < order; ++i)
    for (std::size_t j = 0; i + j < order; ++j) {
      out.value[i + j] += a.value[i] * b.value[j];
      out.bound[i + j] += a.bound[i] * b.bound[j];
    }
  return out;
}

/// Theta(c + w) = sum_k value[k] w^k for k < order.
MatrixSeries local_series(const std::vector<PotapovFactor>& factors, const Matrix& constant, cplx c,
                          std::size_t order) {
  const Eigen::Index n = constant.rows();
  MatrixSeries acc{std::vector<Matrix>(order, Matrix::Zero(n, n)),
                   std::vector<Eigen::MatrixXd>(order, Eigen::MatrixXd::Zero(n, n))};
  acc.value[0] = identity(n);
  acc.bound[0] = Eigen::MatrixXd::Identity(n, n);
  for (const auto& f : factors) {
    // b_a(c + w) = ((c - a) + w) / (1 - conj(a) c) * sum_j (conj(a) / (1 - conj(a) c))^j w^j
    const cplx a = f.zero();
    const cplx d = 1.0 - std::conj(a) * c;
    const cplx r = std::conj(a) / d;
    std::vector<cplx> geo(order);
    for (std::size_t j = 0; j < order; ++j) geo[j] = std::pow(r, static_cast<int>(j)) / d;
    const Matrix p = f.projection();
    const Eigen::MatrixXd pa = p.cwiseAbs();
    MatrixSeries factor{std::vector<Matrix>(order, Matrix::Zero(n, n)),
                        std::vector<Eigen::MatrixXd>(order, Eigen::MatrixXd::Zero(n, n))};
    for (std::size_t k = 0; k < order; ++k) {
      const cplx beta = (c - a) * geo[k] + (k > 0 ? geo[k - 1] : cplx{});
      factor.value[k] = beta * p;
      factor.bound[k] = std::abs(beta) * pa;
    }
    factor.value[0] += identity(n) - p;
    factor.bound[0] += (identity(n) - p).cwiseAbs();
    acc = series_mul(acc, factor, order);
  }
  for (std::size_t k = 0; k < order; ++k) {
    acc.value[k] = acc.value[k] * constant;
    acc.bound[k] = acc.bound[k] * constant.cwiseAbs();
  }
  return acc;
}

/// Series of the minor on the given rows and columns, by Laplace expansion.
ScalarSeries minor_series(const MatrixSeries& m, const std::vector<Eigen::Index>& rows,
                          const std::vector<Eigen::Index>& cols, std::size_t order) {
  if (rows.size() == 1) {
    ScalarSeries out{std::vector<cplx>(order), std::vector<double>(order)};
    for (std::size_t k = 0; k < order; ++k) {
      out.value[k] = m.value[k](rows[0], cols[0]);
      out.bound[k] = m.bound[k](rows[0], cols[0]);
    }
    return out;
  }
  ScalarSeries acc{std::vector<cplx>(order, cplx{}), std::vector<double>(order, 0.0)};
  const std::vector<Eigen::Index> sub_rows(rows.begin() + 1, rows.end());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    std::vector<Eigen::Index> sub_cols = cols;
    sub_cols.erase(sub_cols.begin() + static_cast<std::ptrdiff_t>(j));
    const ScalarSeries term =
        series_mul(minor_series(m, {rows[0]}, {cols[j]}, order), minor_series(m, sub_rows, sub_cols, order), order);
    const double sign = j % 2 == 0 ? 1.0 : -1.0;
    for (std::size_t k = 0; k < order; ++k) {
      acc.value[k] += sign * term.value[k];
      acc.bound[k] += term.bound[k];
    }
  }
  return acc;
}

/// Order of vanishing of the minor series at w = 0, capped at the series length.
int series_order(const ScalarSeries& s) {
  int k = 0;
  const double eps_scale = std::numeric_limits<double>::epsilon();
  while (static_cast<std::size_t>(k) < s.value.size() &&
         std::abs(s.value[static_cast<std::size_t>(k)]) <=
             std::max(kMinorVanishing * s.bound[static_cast<std::size_t>(k)], eps_scale))
    ++k;
  return k;
}

void for_each_subset(Eigen::Index n, Eigen::Index k, const std::function<void(const std::vector<Eigen::Index>&)>& f) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(k));
  std::iota(idx.begin(), idx.end(), 0);
  for (;;) {
    f(idx);
    Eigen::Index i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (Eigen::Index j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

}  // namespace

PotapovFactor::PotapovFactor(cplx zero, Vector direction) : zero_(zero), direction_(std::move(direction)) {
  if (std::abs(zero_) >= 1.0) throw Error(ErrorKind::out_of_disk, "PotapovFactor: zero outside the open disk");
  const double norm = direction_.norm();
  if (direction_.size() == 0 || norm == 0.0)
    throw Error(ErrorKind::invalid_input, "PotapovFactor: projection direction is zero");
  direction_ /= norm;
}

Matrix PotapovFactor::operator()(cplx z) const {
  const cplx b = (z - zero_) / (1.0 - std::conj(zero_) * z);
  return identity(size()) + (b - 1.0) * projection();
}

MatrixInnerFunction::MatrixInnerFunction(std::vector<PotapovFactor> factors, Matrix constant, const Tolerances& tol)
    : factors_(std::move(factors)), constant_(std::move(constant)) {
  const Eigen::Index n = constant_.rows();
  if (constant_.cols() != n || n == 0)
    throw Error(ErrorKind::size_mismatch, "MatrixInnerFunction: constant must be a nonempty square matrix");
  for (const auto& f : factors_)
    if (f.size() != n) throw Error(ErrorKind::size_mismatch, "MatrixInnerFunction: factor size differs from constant");
  if ((constant_.adjoint() * constant_ - identity(n)).norm() > tol.eval)
    throw Error(ErrorKind::invalid_input, "MatrixInnerFunction: constant is not unitary");
  const Vector pts = circle_points(kUnitarySamples);
  for (int k = 0; k < kUnitarySamples; ++k) {
    const Matrix v = (*this)(pts[k]);
    if ((v.adjoint() * v - identity(n)).norm() > tol.eval)
      throw Error(ErrorKind::numerical_failure, "MatrixInnerFunction: not unitary on the circle");
  }
}

Matrix MatrixInnerFunction::operator()(cplx z) const {
  Matrix out = identity(size());
  for (const auto& f : factors_) out = out * f(z);
  return out * constant_;
}

InnerFunction MatrixInnerFunction::determinant() const {
  std::vector<Zero> zeros;
  for (const auto& f : factors_) zeros.push_back({f.zero(), 1});
  const cplx c = constant_.determinant();
  return InnerFunction(zeros, c / std::abs(c));
}

PolyMatrix MatrixInnerFunction::numerator() const {
  const auto n = static_cast<std::size_t>(size());
  // Coefficient matrices, lowest degree first.
  std::vector<Matrix> acc{identity(size())};
  for (const auto& f : factors_) {
    const Matrix p = f.projection();
    const Matrix q = identity(size()) - p;
    const cplx a = f.zero();
    // (1 - conj(a) z)(I - P) + (z - a) P.
    const Matrix c0 = q - a * p;
    const Matrix c1 = p - std::conj(a) * q;
    std::vector<Matrix> next(acc.size() + 1, Matrix::Zero(size(), size()));
    for (std::size_t k = 0; k < acc.size(); ++k) {
      next[k] += acc[k] * c0;
      next[k + 1] += acc[k] * c1;
    }
    acc = std::move(next);
  }
  for (auto& c : acc) c = (c * constant_).eval();
  PolyMatrix out(n, std::vector<Polynomial>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<cplx> c(acc.size());
      for (std::size_t k = 0; k < acc.size(); ++k)
        c[k] = acc[k](static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      out[i][j] = Polynomial(std::move(c));
    }
  return out;
}

Polynomial MatrixInnerFunction::common_denominator() const {
  Polynomial d{1.0};
  for (const auto& f : factors_) d = d * Polynomial{1.0, -std::conj(f.zero())};
  return d;
}

MatrixInnerFunction potapov_product(std::vector<PotapovFactor> factors, Matrix constant, const Tolerances& tol) {
  return MatrixInnerFunction(std::move(factors), std::move(constant), tol);
}

std::vector<RationalFunction> minors_order(const MatrixInnerFunction& theta, int k) {
  const auto n = static_cast<std::size_t>(theta.size());
  if (k < 1 || static_cast<std::size_t>(k) > n)
    throw Error(ErrorKind::invalid_input, "minors_order: order must lie in [1, N]");
  const PolyMatrix num = theta.numerator();
  const Polynomial den = theta.common_denominator().pow(k);
  std::vector<cplx> poles;
  for (const auto& f : theta.factors())
    if (f.zero() != cplx{}) poles.push_back(1.0 / std::conj(f.zero()));
  const Vector pts = circle_points(kUnitarySamples);

  std::vector<RationalFunction> out;
  const auto subsets = combinations(n, static_cast<std::size_t>(k));
  for (const auto& rows : subsets) {
    for (const auto& cols : subsets) {
      PolyMatrix sub;
      for (std::size_t r : rows) {
        std::vector<Polynomial> row;
        for (std::size_t c : cols) row.push_back(num[r][c]);
        sub.push_back(std::move(row));
      }
      const Polynomial minor = poly_det(sub);
      double sup = 0.0;
      for (int s = 0; s < kUnitarySamples; ++s) sup = std::max(sup, std::abs(minor(pts[s]) / den(pts[s])));
      if (minor.is_zero() || sup <= kZeroMinor) out.emplace_back();
      else out.push_back(RationalFunction::cancel_at(minor, den, poles));
    }
  }
  return out;
}

InnerFunction minimal_function_from_theta(const MatrixInnerFunction& theta, const Tolerances& tol) {
  const InnerFunction det = theta.determinant().with_constant(1.0);
  const Eigen::Index n = theta.size();
  if (n == 1) return det;
  // The gcd of the minors divides det, so only det's zeros can occur in it;
  // its order at each is the least vanishing order among the minors, read
  // from their local Taylor series.
  std::vector<Zero> quotient;
  for (const auto& z : det.zeros()) {
    const auto order = static_cast<std::size_t>(z.multiplicity) + 1;
    const MatrixSeries local = local_series(theta.factors(), theta.constant(), z.location, order);
    int common = z.multiplicity;
    for_each_subset(n, n - 1, [&](const std::vector<Eigen::Index>& rows) {
      for_each_subset(n, n - 1, [&](const std::vector<Eigen::Index>& cols) {
        common = std::min(common, series_order(minor_series(local, rows, cols, order)));
      });
    });
    if (z.multiplicity - common > 0) quotient.push_back({z.location, z.multiplicity - common});
  }
  return InnerFunction(quotient, 1.0, tol);
}

Operator model_operator(const MatrixInnerFunction& theta, const Tolerances& tol) {
  const Eigen::Index n = theta.size();
  const int d = theta.determinant().degree();
  const std::string label = "K2(Theta, N=" + std::to_string(n) + ")";
  if (d == 0) return empty_operator(label);

  const Vector& nodes = quadrature_nodes();
  const Eigen::Index m = nodes.size();
  std::vector<Matrix> values(static_cast<std::size_t>(m));
  for (Eigen::Index k = 0; k < m; ++k) values[static_cast<std::size_t>(k)] = theta(nodes[k]);

  std::vector<cplx> points;
  for (double r : kKernelRadii)
    for (int a = 0; a < kKernelAngles; ++a)
      points.push_back(std::polar(r, 2.0 * std::numbers::pi * (a + (r > 0.5 ? 0.5 : 0.0)) / kKernelAngles));

  // Samples of (I - Theta(z) Theta(w)*) xi / (1 - conj(w) z), component-major,
  // scaled so the Euclidean inner product is the quadrature inner product.
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  Matrix samples(n * m, static_cast<Eigen::Index>(points.size()) * n);
  Eigen::Index col = 0;
  for (cplx w : points) {
    const Matrix tw = theta(w).adjoint();
    for (Eigen::Index xi = 0; xi < n; ++xi, ++col) {
      for (Eigen::Index k = 0; k < m; ++k) {
        const Vector v = (identity(n).col(xi) - values[static_cast<std::size_t>(k)] * tw.col(xi)) /
                         (1.0 - std::conj(w) * nodes[k]) * scale;
        for (Eigen::Index i = 0; i < n; ++i) samples(i * m + k, col) = v[i];
      }
    }
  }

  const SvdResult dec = svd(samples, Eigen::ComputeThinU);
  const Eigen::VectorXd& sv = dec.values;
  const int rank = rank_of_singular_values(sv, tol.rank);
  if (rank < d)
    throw Error(ErrorKind::spanning_failure, "model_operator: kernel samples span " + std::to_string(rank) +
                                                 " dimensions, expected " + std::to_string(d));
  const Matrix basis = dec.u.leftCols(d);
  Matrix shifted = basis;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index k = 0; k < m; ++k) shifted.row(i * m + k) *= nodes[k];
  const Matrix s = basis.adjoint() * shifted;

  if (spectral_norm(s) > 1.0 + tol.op)
    throw Error(ErrorKind::numerical_failure, "model_operator: compressed shift is not a contraction");
  // Pure Theta gives defect N; directions where Theta is constant drop out.
  const Matrix t0 = theta(0.0);
  const int expected = numerical_rank_floor(identity(n) - t0.adjoint() * t0, tol.rank, 1.0);
  const DefectClass cls = defect_classify(Operator::on(s), tol);
  if (cls.defect != expected || cls.defect_star != expected)
    throw Error(ErrorKind::numerical_failure, "model_operator: defect indices differ from rank(I - Theta(0)* Theta(0))");
  return Operator(s, {label, d}, {label, d});
}

JordanModel jordan_model(const Operator& t, const RootSet& spectrum_hint, const Tolerances& tol) {
  if (!t.square()) throw Error(ErrorKind::size_mismatch, "jordan_model: operator is not square");
  if (t.rows() > 0 && !defect_classify(t, tol).is_c0n)
    throw Error(ErrorKind::invalid_input, "jordan_model: operator is not of class C0(N)");

  std::vector<std::vector<Zero>> levels;
  int total = 0;
  for (const auto& r : spectrum_hint.roots) {
    if (std::abs(r.location) >= 1.0) throw Error(ErrorKind::not_c0, "jordan_model: hinted eigenvalue outside the disk");
    const auto ranks = blaschke_rank_sequence(t.matrix(), r.location, r.multiplicity + 1, tol);
    if (ranks[ranks.size() - 1] != ranks[ranks.size() - 2])
      throw Error(ErrorKind::invalid_input, "jordan_model: spectrum hint multiplicity too small");
    // chains of length >= j: ranks[j-1] - ranks[j]; i-th largest chain has
    // length #{j : ranks[j-1] - ranks[j] >= i}.
    const int count = ranks[0] - ranks[1];
    for (int i = 1; i <= count; ++i) {
      int length = 0;
      for (std::size_t j = 1; j < ranks.size(); ++j)
        if (ranks[j - 1] - ranks[j] >= i) ++length;
      if (static_cast<int>(levels.size()) < i) levels.resize(static_cast<std::size_t>(i));
      levels[static_cast<std::size_t>(i - 1)].push_back({r.location, length});
      total += length;
    }
  }
  if (total != t.rows())
    throw Error(ErrorKind::invalid_input, "jordan_model: spectrum hint does not cover the spectrum");
  JordanModel out;
  for (auto& zeros : levels) out.functions.emplace_back(std::move(zeros), 1.0, tol);
  return out;
}

int generated_dimension(const Matrix& t, const Matrix& v, double rel) {
  if (v.cols() == 0 || t.rows() == 0) return 0;
  Matrix q = range_basis(v, rel);
  for (;;) {
    Matrix both(q.rows(), 2 * q.cols());
    both << q, t * q;
    Matrix next = range_basis(both, rel);
    if (next.cols() == q.cols()) return static_cast<int>(q.cols());
    q = std::move(next);
  }
}

MultiplicityResult multiplicity(const Operator& t, const RootSet& spectrum_hint, std::uint64_t seed,
                                const Tolerances& tol) {
  MultiplicityResult out;
  out.value = static_cast<int>(jordan_model(t, spectrum_hint, tol).functions.size());
  const auto n = static_cast<int>(t.rows());
  Rng rng(seed);
  out.generator_check = true;
  for (int trial = 0; trial < kGeneratorTrials && out.generator_check; ++trial) {
    if (generated_dimension(t.matrix(), rng.gaussian(n, out.value), tol.rank) != n) out.generator_check = false;
    if (out.value > 0 && generated_dimension(t.matrix(), rng.gaussian(n, out.value - 1), tol.rank) == n)
      out.generator_check = false;
  }
  return out;
}

QuasiSimilarityWitness quasi_similarity_witness(const Operator& t, const JordanModel& j, std::uint64_t seed,
                                                const Tolerances& tol) {
  const Operator s = jordan_operator(j.functions);
  const OperatorSpaceBasis xs = intertwiner_space(s, t, tol);  // T X = X S
  const OperatorSpaceBasis ys = intertwiner_space(t, s, tol);  // S Y = Y T
  Rng rng(seed);
  auto search = [&](const OperatorSpaceBasis& basis, int& draws) -> std::optional<Operator> {
    if (basis.dimension() == 0) return std::nullopt;
    for (int k = 0; k < kWitnessDraws; ++k) {
      ++draws;
      Matrix x = Matrix::Zero(basis.basis[0].rows(), basis.basis[0].cols());
      for (const auto& b : basis.basis) x += rng.complex_normal() * b.matrix();
      Operator candidate(x, basis.basis[0].source(), basis.basis[0].target());
      if (quasi_affinity_check(candidate, tol)) return candidate;
    }
    return std::nullopt;
  };
  QuasiSimilarityWitness out;
  int draws_x = 0;
  int draws_y = 0;
  const auto x = search(xs, draws_x);
  const auto y = search(ys, draws_y);
  if (!x || !y)
    throw Error(ErrorKind::witness_failure, "quasi_similarity_witness: no invertible intertwiner found in " +
                                                std::to_string(kWitnessDraws) + " draws");
  out.x = *x;
  out.y = *y;
  out.draws = std::max(draws_x, draws_y);
  return out;
}

Matrix stein_contraction(const Matrix& t) {
  const Eigen::Index n = t.rows();
  if (n == 0) return t;
  if (spectral_radius(t) >= 1.0) throw Error(ErrorKind::not_c0, "stein_contraction: spectral radius is not below 1");
  // vec(T* P T) = (T^T kron T*) vec(P).
  const Matrix ta = t.adjoint();
  Matrix k = identity(n * n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) k.block(i * n, j * n, n, n) -= t(j, i) * ta;
  const Vector p_vec = k.partialPivLu().solve(vectorize(identity(n)));
  Matrix p = unvectorize(p_vec, n, n);
  p = (0.5 * (p + p.adjoint())).eval();
  Eigen::LLT<Matrix> llt(p);
  if (llt.info() != Eigen::Success) throw Error(ErrorKind::numerical_failure, "stein_contraction: P is not positive");
  const Matrix l = llt.matrixL();
  const Matrix lt = l.adjoint();
  const Matrix left = lt * t;
  // left * L^{-*}: solve X L* = left.
  return lt.triangularView<Eigen::Upper>().solve<Eigen::OnTheRight>(left);
}

}  // namespace mslab
