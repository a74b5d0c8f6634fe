#include "mslab/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

namespace mslab {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

}  // namespace

Polynomial::Polynomial(cplx c) {
  if (c != cplx{}) coeffs_.push_back(c);
}

Polynomial::Polynomial(std::vector<cplx> coefficients) : coeffs_(std::move(coefficients)) {
  trim();
}

Polynomial::Polynomial(std::initializer_list<cplx> coefficients) : coeffs_(coefficients) {
  trim();
}

Polynomial Polynomial::monomial(int degree, cplx coefficient) {
  std::vector<cplx> c(static_cast<std::size_t>(degree) + 1, cplx{});
  c.back() = coefficient;
  return Polynomial(std::move(c));
}

Polynomial Polynomial::from_roots(std::span<const cplx> roots, cplx lead) {
  std::vector<cplx> c{lead};
  for (cplx r : roots) {
    c.push_back(cplx{});
    for (std::size_t k = c.size() - 1; k > 0; --k) c[k] = c[k - 1] - r * c[k];
    c[0] = -r * c[0];
  }
  return Polynomial(std::move(c));
}

void Polynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back() == cplx{}) coeffs_.pop_back();
}

cplx Polynomial::operator[](int k) const {
  if (k < 0 || k > degree()) return {};
  return coeffs_[static_cast<std::size_t>(k)];
}

cplx Polynomial::operator()(cplx z) const {
  cplx acc{};
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

double Polynomial::magnitude_bound(cplx z) const {
  const double r = std::abs(z);
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * r + std::abs(*it);
  return acc;
}

double Polynomial::max_abs_coefficient() const {
  double m = 0.0;
  for (cplx c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<cplx> d(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = static_cast<double>(k) * coeffs_[k];
  return Polynomial(std::move(d));
}

Polynomial Polynomial::taylor_shift(cplx center) const {
  // Repeated synthetic division; c[k] ends as p^(k)(center)/k!.
  std::vector<cplx> c = coeffs_;
  const auto n = c.size();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t k = n - 1; k > i; --k) c[k - 1] += center * c[k];
  }
  return Polynomial(std::move(c));
}

Polynomial Polynomial::trimmed(double rel) const {
  const double cut = rel * max_abs_coefficient();
  std::vector<cplx> c = coeffs_;
  while (!c.empty() && std::abs(c.back()) <= cut) c.pop_back();
  return Polynomial(std::move(c));
}

Polynomial Polynomial::reflected(int degree) const {
  std::vector<cplx> c(static_cast<std::size_t>(degree) + 1, cplx{});
  for (int k = 0; k <= this->degree() && k <= degree; ++k) {
    c[static_cast<std::size_t>(degree - k)] = std::conj(coeffs_[static_cast<std::size_t>(k)]);
  }
  return Polynomial(std::move(c));
}

Polynomial& Polynomial::operator+=(const Polynomial& rhs) {
  if (rhs.coeffs_.size() > coeffs_.size()) coeffs_.resize(rhs.coeffs_.size());
  for (std::size_t k = 0; k < rhs.coeffs_.size(); ++k) coeffs_[k] += rhs.coeffs_[k];
  trim();
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& rhs) {
  if (rhs.coeffs_.size() > coeffs_.size()) coeffs_.resize(rhs.coeffs_.size());
  for (std::size_t k = 0; k < rhs.coeffs_.size(); ++k) coeffs_[k] -= rhs.coeffs_[k];
  trim();
  return *this;
}

Polynomial& Polynomial::operator*=(const Polynomial& rhs) {
  if (is_zero() || rhs.is_zero()) {
    coeffs_.clear();
    return *this;
  }
  std::vector<cplx> out(coeffs_.size() + rhs.coeffs_.size() - 1, cplx{});
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    for (std::size_t j = 0; j < rhs.coeffs_.size(); ++j) out[i + j] += coeffs_[i] * rhs.coeffs_[j];
  coeffs_ = std::move(out);
  trim();
  return *this;
}

Polynomial& Polynomial::operator*=(cplx s) {
  for (cplx& c : coeffs_) c *= s;
  trim();
  return *this;
}

Polynomial Polynomial::pow(int k) const {
  Polynomial out(1.0);
  for (int i = 0; i < k; ++i) out *= *this;
  return out;
}

std::pair<Polynomial, Polynomial> divmod(const Polynomial& num, const Polynomial& den) {
  if (den.is_zero()) throw Error(ErrorKind::degenerate_input, "polynomial division by zero");
  if (num.degree() < den.degree()) return {Polynomial{}, num};
  std::vector<cplx> rem = num.coefficients();
  const int dn = den.degree();
  const cplx lead = den.leading();
  std::vector<cplx> quot(static_cast<std::size_t>(num.degree() - dn) + 1, cplx{});
  for (int k = num.degree() - dn; k >= 0; --k) {
    const cplx q = rem[static_cast<std::size_t>(k + dn)] / lead;
    quot[static_cast<std::size_t>(k)] = q;
    for (int j = 0; j <= dn; ++j) rem[static_cast<std::size_t>(k + j)] -= q * den[j];
    rem[static_cast<std::size_t>(k + dn)] = cplx{};
  }
  rem.resize(static_cast<std::size_t>(dn));
  return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
}

int RootSet::degree() const {
  int d = 0;
  for (const auto& r : roots) d += r.multiplicity;
  return d;
}

std::vector<cplx> RootSet::expanded() const {
  std::vector<cplx> out;
  for (const auto& r : roots)
    for (int k = 0; k < r.multiplicity; ++k) out.push_back(r.location);
  return out;
}

namespace {

Polynomial abs_polynomial(const Polynomial& p) {
  std::vector<cplx> c;
  c.reserve(p.coefficients().size());
  for (cplx x : p.coefficients()) c.emplace_back(std::abs(x));
  return Polynomial(std::move(c));
}

// Residual scaled so roots of any modulus are judged on the same footing:
// for |r| > 1 this is the reversed polynomial evaluated at 1/r.
double scaled_residual(const Polynomial& p, cplx r) {
  const double scale = std::pow(std::max(1.0, std::abs(r)), p.degree());
  return std::abs(p(r)) / scale;
}

bool converged_at(const Polynomial& p, cplx z, cplx value) {
  return std::abs(value) <= 8.0 * (p.degree() + 1) * kEps * p.magnitude_bound(z);
}

std::vector<cplx> aberth(const Polynomial& q) {
  const int n = q.degree();
  if (n <= 0) return {};
  if (n == 1) return {-q[0] / q[1]};

  const Polynomial dq = q.derivative();
  const double radius = std::pow(std::abs(q[0] / q[n]), 1.0 / n);
  std::mt19937_64 rng(0x5eedULL);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<cplx> best;
  double best_residual = std::numeric_limits<double>::infinity();
  constexpr int kAttempts = 6;
  constexpr int kMaxIter = 600;

  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    std::vector<cplx> z(static_cast<std::size_t>(n));
    const double offset = 0.4 + (attempt == 0 ? 0.0 : 2.0 * std::numbers::pi * unit(rng));
    for (int k = 0; k < n; ++k) {
      const double rad = radius * (attempt == 0 ? 1.0 : 0.5 + unit(rng));
      z[static_cast<std::size_t>(k)] = std::polar(rad, offset + 2.0 * std::numbers::pi * k / n);
    }
    std::vector<bool> done(static_cast<std::size_t>(n), false);
    bool all_done = false;
    for (int iter = 0; iter < kMaxIter && !all_done; ++iter) {
      all_done = true;
      for (std::size_t i = 0; i < z.size(); ++i) {
        if (done[i]) continue;
        const cplx pz = q(z[i]);
        if (converged_at(q, z[i], pz)) {
          done[i] = true;
          continue;
        }
        all_done = false;
        const cplx dpz = dq(z[i]);
        if (dpz == cplx{}) {
          z[i] += cplx(1e-8, 1e-8) * std::max(1.0, std::abs(z[i]));
          continue;
        }
        const cplx ratio = pz / dpz;
        cplx repulsion{};
        for (std::size_t j = 0; j < z.size(); ++j) {
          if (j == i) continue;
          cplx diff = z[i] - z[j];
          if (diff == cplx{}) diff = cplx(kEps, kEps);
          repulsion += 1.0 / diff;
        }
        const cplx step = ratio / (1.0 - ratio * repulsion);
        z[i] -= step;
        if (std::abs(step) <= kEps * std::abs(z[i])) done[i] = true;
      }
    }
    double worst = 0.0;
    for (cplx r : z) worst = std::max(worst, scaled_residual(q, r) / q.max_abs_coefficient());
    if (all_done) return z;
    if (worst < best_residual) {
      best_residual = worst;
      best = z;
    }
  }
  std::ostringstream msg;
  msg << "root finder did not converge (degree " << n << ", best scaled residual " << best_residual
      << ")";
  throw RootFindingError(msg.str(), best);
}

struct Cluster {
  cplx centroid;
  int count;
};

// A k-fold root perturbed by rounding splits into a cluster of radius about
// (k * noise / |q^(k)(c)/k!|)^(1/k); accept the cluster when its spread is
// within a safety factor of that radius.
bool cluster_consistent(const Polynomial& q, cplx center, double spread, int order) {
  const Polynomial t = q.taylor_shift(center);
  const double lead = std::abs(t[order]);
  if (lead == 0.0) return false;
  const double noise = kEps * abs_polynomial(q)(cplx(std::abs(center))).real();
  const double radius = std::pow(order * noise / lead, 1.0 / order);
  return spread <= 100.0 * radius;
}

cplx polish_multiple(const Polynomial& q, cplx center, int order) {
  Polynomial d = q;
  for (int k = 1; k < order; ++k) d = d.derivative();
  const Polynomial dd = d.derivative();
  cplx z = center;
  for (int it = 0; it < 3; ++it) {
    const cplx slope = dd(z);
    if (slope == cplx{}) break;
    const cplx next = z - d(z) / slope;
    if (std::abs(d(next)) >= std::abs(d(z))) break;
    z = next;
  }
  return z;
}

std::vector<Cluster> cluster_roots(const Polynomial& q, const std::vector<cplx>& z,
                                   double pair_tol) {
  // Tight clusters: single linkage at the pairing tolerance.
  const std::size_t n = z.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(z[i] - z[j]) <= pair_tol) parent[find(i)] = find(j);

  std::vector<Cluster> tight;
  {
    std::vector<std::vector<cplx>> groups(n);
    for (std::size_t i = 0; i < n; ++i) groups[find(i)].push_back(z[i]);
    for (auto& g : groups) {
      if (g.empty()) continue;
      cplx sum{};
      for (cplx x : g) sum += x;
      tight.push_back({sum / static_cast<double>(g.size()), static_cast<int>(g.size())});
    }
  }

  // Loose clusters: a seed plus its nearest neighbours, accepted when the
  // Taylor data at the weighted centroid vanish to the claimed order.
  std::vector<Cluster> out;
  std::vector<bool> used(tight.size(), false);
  while (true) {
    int best_count = 0;
    std::vector<std::size_t> best_members;
    cplx best_center{};
    for (std::size_t s = 0; s < tight.size(); ++s) {
      if (used[s]) continue;
      std::vector<std::size_t> order;
      for (std::size_t t = 0; t < tight.size(); ++t)
        if (!used[t] && t != s) order.push_back(t);
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::abs(tight[a].centroid - tight[s].centroid) <
               std::abs(tight[b].centroid - tight[s].centroid);
      });
      const double loose = 3e-2 * std::max(1.0, std::abs(tight[s].centroid));
      std::vector<std::size_t> members{s};
      cplx weighted = tight[s].centroid * static_cast<double>(tight[s].count);
      int count = tight[s].count;
      for (std::size_t t : order) {
        if (std::abs(tight[t].centroid - tight[s].centroid) > loose) break;
        members.push_back(t);
        weighted += tight[t].centroid * static_cast<double>(tight[t].count);
        count += tight[t].count;
        const cplx center = weighted / static_cast<double>(count);
        double spread = 0.0;
        for (std::size_t m : members) spread = std::max(spread, std::abs(tight[m].centroid - center));
        if (count > best_count && cluster_consistent(q, center, spread, count)) {
          best_count = count;
          best_members = members;
          best_center = center;
        }
      }
    }
    if (best_count == 0) break;
    for (std::size_t m : best_members) used[m] = true;
    out.push_back({polish_multiple(q, best_center, best_count), best_count});
  }
  for (std::size_t s = 0; s < tight.size(); ++s) {
    if (used[s]) continue;
    const cplx c =
        tight[s].count > 1 ? polish_multiple(q, tight[s].centroid, tight[s].count) : tight[s].centroid;
    out.push_back({c, tight[s].count});
  }
  return out;
}

}  // namespace

RootSet poly_roots(const Polynomial& p, const Tolerances& tol) {
  if (p.is_zero()) throw Error(ErrorKind::degenerate_input, "poly_roots: zero polynomial");

  int zero_mult = 0;
  while (zero_mult < p.degree() && p[zero_mult] == cplx{}) ++zero_mult;
  std::vector<cplx> rest(p.coefficients().begin() + zero_mult, p.coefficients().end());
  const Polynomial q(std::move(rest));

  RootSet out;
  if (zero_mult > 0) out.roots.push_back({cplx{}, zero_mult});
  if (q.degree() > 0) {
    const auto raw = aberth(q);
    for (const auto& c : cluster_roots(q, raw, tol.pair)) out.roots.push_back({c.centroid, c.count});
  }

  // Keep distinct locations separated by more than the pairing tolerance.
  for (std::size_t i = 0; i < out.roots.size(); ++i) {
    for (std::size_t j = i + 1; j < out.roots.size();) {
      if (std::abs(out.roots[i].location - out.roots[j].location) <= tol.pair) {
        out.roots[i].multiplicity += out.roots[j].multiplicity;
        out.roots.erase(out.roots.begin() + static_cast<std::ptrdiff_t>(j));
      } else {
        ++j;
      }
    }
  }

  const double scale = p.max_abs_coefficient();
  for (const auto& r : out.roots) {
    if (scaled_residual(p, r.location) > tol.root * scale) {
      std::ostringstream msg;
      msg << "root residual too large at " << r.location;
      throw RootFindingError(msg.str(), out.expanded());
    }
  }
  return out;
}

int vanishing_order(const Polynomial& p, cplx point, double rel) {
  if (p.is_zero()) throw Error(ErrorKind::degenerate_input, "vanishing_order: zero polynomial");
  const Polynomial t = p.taylor_shift(point);
  const Polynomial scale = abs_polynomial(p).taylor_shift(cplx(std::abs(point)));
  const double floor = rel * scale.max_abs_coefficient();
  int order = 0;
  while (order < p.degree() && std::abs(t[order]) <= std::max(rel * std::abs(scale[order]), floor))
    ++order;
  return order;
}

cplx LaurentPolynomial::operator()(cplx z) const {
  const int n = half_degree();
  cplx acc{};
  for (int k = static_cast<int>(coefficients.size()) - 1; k >= 0; --k)
    acc = acc * z + coefficients[static_cast<std::size_t>(k)];
  return acc * std::pow(z, -n);
}

LaurentPolynomial LaurentPolynomial::abs_squared(const Polynomial& p) {
  const int n = std::max(p.degree(), 0);
  LaurentPolynomial out;
  out.coefficients.assign(static_cast<std::size_t>(2 * n + 1), cplx{});
  for (int j = 0; j <= p.degree(); ++j)
    for (int k = 0; k <= p.degree(); ++k)
      out.coefficients[static_cast<std::size_t>(j - k + n)] += p[j] * std::conj(p[k]);
  return out;
}

LaurentPolynomial& LaurentPolynomial::operator+=(const LaurentPolynomial& rhs) {
  const int n = std::max(half_degree(), rhs.half_degree());
  std::vector<cplx> c(static_cast<std::size_t>(2 * n + 1), cplx{});
  for (int k = -half_degree(); k <= half_degree(); ++k)
    c[static_cast<std::size_t>(k + n)] += coefficients[static_cast<std::size_t>(k + half_degree())];
  for (int k = -rhs.half_degree(); k <= rhs.half_degree(); ++k)
    c[static_cast<std::size_t>(k + n)] +=
        rhs.coefficients[static_cast<std::size_t>(k + rhs.half_degree())];
  coefficients = std::move(c);
  return *this;
}

Polynomial fejer_riesz(const LaurentPolynomial& laurent, const Tolerances& tol) {
  const auto& c = laurent.coefficients;
  if (c.empty() || c.size() % 2 == 0)
    throw Error(ErrorKind::degenerate_input, "fejer_riesz: need 2n+1 Laurent coefficients");
  int n = laurent.half_degree();
  double scale = 0.0;
  for (cplx x : c) scale = std::max(scale, std::abs(x));
  for (int k = 0; k <= n; ++k) {
    const cplx lo = c[static_cast<std::size_t>(n - k)];
    const cplx hi = c[static_cast<std::size_t>(n + k)];
    if (std::abs(lo - std::conj(hi)) > 1e-12 * std::max(scale, 1.0))
      throw Error(ErrorKind::degenerate_input, "fejer_riesz: coefficients not conjugate-symmetric");
  }

  constexpr int kSamples = 512;
  const Vector pts = circle_points(kSamples);
  Eigen::VectorXd values(kSamples);
  for (int k = 0; k < kSamples; ++k) {
    values[k] = laurent(pts[k]).real();
    if (!(values[k] > 0.0)) {
      const double angle = 2.0 * std::numbers::pi * k / kSamples;
      std::ostringstream msg;
      msg << "fejer_riesz: not strictly positive at angle " << angle;
      throw NotFactorableError(msg.str(), angle);
    }
  }

  // Drop vanishing outer coefficients so the associated polynomial has a
  // nonzero constant term.
  while (n > 0 && std::abs(c[static_cast<std::size_t>(2 * n)]) <= 1e-14 * scale) --n;
  const int offset = laurent.half_degree() - n;

  std::vector<cplx> outside;
  if (n > 0) {
    std::vector<cplx> assoc(c.begin() + offset, c.begin() + offset + 2 * n + 1);
    const RootSet roots = poly_roots(Polynomial(std::move(assoc)), tol);
    for (const auto& r : roots.roots) {
      const double mod = std::abs(r.location);
      if (std::abs(mod - 1.0) <= tol.pair) {
        const double angle = std::arg(r.location);
        throw NotFactorableError("fejer_riesz: root on the unit circle", angle);
      }
      if (mod > 1.0)
        for (int m = 0; m < r.multiplicity; ++m) outside.push_back(r.location);
    }
    if (static_cast<int>(outside.size()) != n)
      throw Error(ErrorKind::numerical_failure,
                  "fejer_riesz: reciprocal root pairing failed to split evenly");
  }

  const Polynomial shape = Polynomial::from_roots(outside);
  double ratio_sum = 0.0;
  for (int k = 0; k < kSamples; ++k) ratio_sum += values[k] / std::norm(shape(pts[k]));
  const double modulus = std::sqrt(ratio_sum / kSamples);
  const cplx at_zero = shape(0.0);
  const cplx lead = modulus * std::conj(at_zero) / std::abs(at_zero);
  Polynomial s = shape * lead;

  double worst = 0.0;
  for (int k = 0; k < kSamples; ++k) worst = std::max(worst, std::abs(std::norm(s(pts[k])) - values[k]));
  if (worst > tol.fr * values.maxCoeff())
    throw Error(ErrorKind::numerical_failure, "fejer_riesz: factor does not reproduce the input");
  return s;
}

}  // namespace mslab
