#include "mslab/calculus.hpp"

#include <sstream>

namespace mslab {

namespace {

constexpr int kReconstructionSamples = 64;

std::string describe(cplx z) {
  std::ostringstream os;
  os << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  return os.str();
}

void require_square(const Operator& t, const char* where) {
  if (!t.square())
    throw Error(ErrorKind::size_mismatch, std::string(where) + ": operator is not square");
}

Matrix identity_like(const Matrix& t) { return Matrix::Identity(t.rows(), t.cols()); }

/// b_lambda(T) = (T - lambda) (I - conj(lambda) T)^{-1}; the factors commute.
Matrix blaschke_of(const Matrix& t, cplx lambda) {
  const Matrix eye = identity_like(t);
  return solve_refined(eye - std::conj(lambda) * t, t - lambda * eye);
}

Matrix inner_of(const InnerFunction& u, const Matrix& t) {
  Matrix out = u.constant() * identity_like(t);
  for (const auto& z : u.zeros()) {
    const Matrix b = blaschke_of(t, z.location);
    for (int k = 0; k < z.multiplicity; ++k) out = out * b;
  }
  return out;
}

/// Sup of |f| on the circle; by von Neumann's inequality it bounds ||f(T)||
/// for contractions, so it is the natural scale for rank decisions on f(T).
double circle_sup(const RationalFunction& f) {
  const Vector pts = circle_points(kReconstructionSamples);
  double sup = 0.0;
  for (int k = 0; k < kReconstructionSamples; ++k) sup = std::max(sup, std::abs(f(pts[k])));
  return sup;
}

int defect_rank(const Matrix& a, const Tolerances& tol) { return numerical_rank_floor(a, tol.rank, 1.0); }

}  // namespace

NevanlinnaFunction::NevanlinnaFunction(RationalFunction psi, RationalFunction chi, const Tolerances& tol)
    : psi_(std::move(psi)), chi_(std::move(chi)) {
  if (chi_.is_zero()) throw Error(ErrorKind::degenerate_input, "NevanlinnaFunction: chi is identically zero");
  const RationalFunction phi = rat_arith(RatOp::div, psi_, chi_, tol);
  canonical_ = smirnov_canonical(phi, tol);
  const Vector pts = circle_points(kReconstructionSamples);
  for (int k = 0; k < kReconstructionSamples; ++k) {
    const cplx z = pts[k] * std::polar(1.0, 0.1);
    const cplx direct = phi(z);
    const cplx rebuilt = canonical_.b(z) / (inner_eval(canonical_.v, z) * canonical_.a(z));
    if (std::abs(direct - rebuilt) > tol.eval * std::max(1.0, std::abs(direct)))
      throw Error(ErrorKind::numerical_failure, "NevanlinnaFunction: canonical triple does not reconstruct psi/chi");
  }
}

NevanlinnaFunction::NevanlinnaFunction(const RationalFunction& phi, const Tolerances& tol)
    : NevanlinnaFunction(phi, RationalFunction(1.0), tol) {}

RationalFunction NevanlinnaFunction::as_rational() const { return rat_arith(RatOp::div, psi_, chi_); }

Operator h_of(const Operator& t, const RationalFunction& h, const Tolerances& tol) {
  require_square(t, "h_of");
  if (!h.analytic_on_closed_disk(tol))
    throw Error(ErrorKind::pole, "h_of: function has a pole in the closed unit disk");
  return Operator(rational_of_matrix(h, t.matrix()), t.source(), t.target());
}

Operator inner_of_operator(const InnerFunction& u, const Operator& t) {
  require_square(t, "inner_of_operator");
  return Operator(inner_of(u, t.matrix()), t.source(), t.target());
}

std::vector<cplx> taylor_coefficients(const RationalFunction& h, cplx a, int order) {
  const Polynomial n = h.numerator().taylor_shift(a);
  const Polynomial d = h.denominator().taylor_shift(a);
  const double bound = h.denominator().magnitude_bound(a);
  if (std::abs(d[0]) <= 64.0 * std::numeric_limits<double>::epsilon() * std::max(bound, 1e-300))
    throw Error(ErrorKind::interpolation_undefined, "function has a pole at node " + describe(a));
  std::vector<cplx> c(static_cast<std::size_t>(order));
  for (int k = 0; k < order; ++k) {
    cplx acc = k <= n.degree() ? n[k] : cplx{};
    for (int j = 1; j <= k && j <= d.degree(); ++j) acc -= d[j] * c[static_cast<std::size_t>(k - j)];
    c[static_cast<std::size_t>(k)] = acc / d[0];
  }
  return c;
}

Polynomial hermite_interpolant(const RationalFunction& h, const InnerFunction& u, const Tolerances&) {
  // Nodes grouped by zero, each repeated to its multiplicity.
  std::vector<cplx> nodes;
  std::vector<std::vector<cplx>> taylor;
  std::vector<std::size_t> group;
  for (const auto& z : u.zeros()) {
    taylor.push_back(taylor_coefficients(h, z.location, z.multiplicity));
    for (int k = 0; k < z.multiplicity; ++k) {
      nodes.push_back(z.location);
      group.push_back(taylor.size() - 1);
    }
  }
  const std::size_t n = nodes.size();
  if (n == 0) return Polynomial{};

  // dd[i] holds f[x_i, ..., x_{i+j}] for the current order j.
  std::vector<cplx> dd(n);
  for (std::size_t i = 0; i < n; ++i) dd[i] = taylor[group[i]][0];
  std::vector<cplx> newton{dd[0]};
  for (std::size_t j = 1; j < n; ++j) {
    for (std::size_t i = 0; i + j < n; ++i) {
      if (group[i] == group[i + j]) dd[i] = taylor[group[i]][j];
      else dd[i] = (dd[i + 1] - dd[i]) / (nodes[i + j] - nodes[i]);
    }
    newton.push_back(dd[0]);
  }

  Polynomial p{newton[n - 1]};
  for (std::size_t j = n - 1; j-- > 0;) p = p * Polynomial{-nodes[j], 1.0} + Polynomial{newton[j]};
  return p;
}

bool k_infinity_member(const RationalFunction& chi, const Operator& t, const Tolerances& tol) {
  require_square(t, "k_infinity_member");
  if (t.rows() == 0) return true;
  const Matrix value = rational_of_matrix(chi, t.matrix());
  return numerical_rank_floor(value, tol.rank, circle_sup(chi)) == t.rows();
}

Operator nevanlinna_apply(const NevanlinnaFunction& phi, const Operator& t, const Tolerances& tol) {
  require_square(t, "nevanlinna_apply");
  const SmirnovTriple& c = phi.canonical();
  const Matrix& tm = t.matrix();
  const Matrix chi = inner_of(c.v, tm) * rational_of_matrix(c.a, tm);
  if (tm.rows() > 0 && numerical_rank_floor(chi, tol.rank, circle_sup(c.a)) < tm.rows()) {
    cplx worst{};
    double worst_ratio = std::numeric_limits<double>::infinity();
    for (const auto& z : c.v.zeros()) {
      const double r = singular_ratio(tm - z.location * identity_like(tm));
      if (r < worst_ratio) {
        worst_ratio = r;
        worst = z.location;
      }
    }
    throw Error(ErrorKind::not_applicable,
                "nevanlinna_apply: denominator shares the zero " + describe(worst) + " with the minimal function");
  }
  const Matrix value = solve_refined(chi, rational_of_matrix(c.b, tm));
  const double scale = std::max(1.0, spectral_norm(value)) * std::max(1.0, spectral_norm(tm));
  if ((value * tm - tm * value).norm() > tol.op * scale * std::sqrt(static_cast<double>(tm.rows())))
    throw Error(ErrorKind::numerical_failure, "nevanlinna_apply: result does not commute with T");
  return Operator(value, t.source(), t.target());
}

std::vector<int> blaschke_rank_sequence(const Matrix& t, cplx lambda, int max_power, const Tolerances& tol) {
  std::vector<int> ranks{static_cast<int>(t.rows())};
  if (t.rows() == 0) {
    ranks.push_back(0);
    return ranks;
  }
  const Matrix b = blaschke_of(t, lambda);
  Matrix power = identity_like(t);
  for (int k = 1; k <= max_power; ++k) {
    power = power * b;
    ranks.push_back(numerical_rank_floor(power, tol.rank, 1.0));
    if (ranks[ranks.size() - 1] == ranks[ranks.size() - 2]) break;
  }
  return ranks;
}

InnerFunction minimal_function(const Operator& t, const RootSet& spectrum_hint, const Tolerances& tol) {
  require_square(t, "minimal_function");
  const Matrix& tm = t.matrix();
  const auto n = static_cast<int>(tm.rows());

  std::vector<Zero> zeros;
  std::vector<Matrix> factors;
  for (const auto& r : spectrum_hint.roots) {
    if (std::abs(r.location) >= 1.0)
      throw Error(ErrorKind::not_c0, "minimal_function: eigenvalue " + describe(r.location) + " is not inside the disk");
    const Matrix b = blaschke_of(tm, r.location);
    const std::vector<int> ranks = blaschke_rank_sequence(tm, r.location, r.multiplicity + 1, tol);
    const int chain = ranks.size() >= 2 && ranks[ranks.size() - 1] == ranks[ranks.size() - 2]
                          ? static_cast<int>(ranks.size()) - 2
                          : -1;
    if (chain < 0)
      throw Error(ErrorKind::invalid_input,
                  "minimal_function: spectrum hint does not cover the eigenvalue " + describe(r.location));
    if (chain > 0) {
      zeros.push_back({r.location, chain});
      factors.push_back(b);
    }
  }
  InnerFunction m(zeros, 1.0, tol);

  auto evaluate = [&](std::size_t skip) {
    Matrix out = identity_like(tm);
    for (std::size_t i = 0; i < zeros.size(); ++i) {
      const int k = zeros[i].multiplicity - (i == skip ? 1 : 0);
      for (int j = 0; j < k; ++j) out = out * factors[i];
    }
    return out;
  };
  if (n > 0 && spectral_norm(evaluate(zeros.size())) > tol.op)
    throw Error(ErrorKind::numerical_failure, "minimal_function: m_T(T) does not vanish");
  for (std::size_t i = 0; i < zeros.size(); ++i)
    if (spectral_norm(evaluate(i)) <= tol.op)
      throw Error(ErrorKind::numerical_failure, "minimal_function: a proper divisor annihilates T");
  return m;
}

DefectClass defect_classify(const Operator& t, const Tolerances& tol) {
  require_square(t, "defect_classify");
  const Matrix& tm = t.matrix();
  if (tm.rows() == 0) return {};
  if (spectral_norm(tm) > 1.0 + tol.op)
    throw Error(ErrorKind::invalid_input, "defect_classify: operator is not a contraction");
  const Matrix eye = identity_like(tm);
  DefectClass out;
  out.defect = defect_rank(eye - tm.adjoint() * tm, tol);
  out.defect_star = defect_rank(eye - tm * tm.adjoint(), tol);
  out.spectral_radius = spectral_radius(tm);
  out.n = out.defect;
  out.is_c0n = out.defect == out.defect_star && out.spectral_radius < 1.0 - tol.pair;
  return out;
}

}  // namespace mslab
