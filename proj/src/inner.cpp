#include "mslab/inner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace mslab {

namespace {

std::string describe(cplx z) {
  std::ostringstream s;
  s << z;
  return s.str();
}

// Index of the nearest zero within pair_tol that still has multiplicity left.
std::size_t nearest_available(const std::vector<Zero>& pool, cplx location, double pair_tol) {
  std::size_t best = pool.size();
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < pool.size(); ++j) {
    if (pool[j].multiplicity == 0) continue;
    const double d = std::abs(pool[j].location - location);
    if (d <= pair_tol && d < best_dist) {
      best = j;
      best_dist = d;
    }
  }
  return best;
}

constexpr int kSmirnovSamples = 512;

}  // namespace

InnerFunction::InnerFunction(std::vector<Zero> zeros, cplx constant, const Tolerances& tol)
    : constant_(constant) {
  if (std::abs(std::abs(constant) - 1.0) > 1e-9)
    throw Error(ErrorKind::invalid_input, "inner function constant must be unimodular");
  for (const auto& z : zeros) {
    if (z.multiplicity <= 0) throw Error(ErrorKind::invalid_input, "zero multiplicity must be positive");
    if (!(std::abs(z.location) < 1.0))
      throw Error(ErrorKind::out_of_disk, "inner function zero outside the open disk: " + describe(z.location));
    const auto hit = nearest_available(zeros_, z.location, tol.pair);
    if (hit != zeros_.size()) zeros_[hit].multiplicity += z.multiplicity;
    else zeros_.push_back(z);
  }
}

InnerFunction InnerFunction::blaschke(cplx a, int multiplicity) {
  return InnerFunction({{a, multiplicity}});
}

InnerFunction InnerFunction::power(int k) {
  if (k == 0) return {};
  return InnerFunction({{cplx{}, k}});
}

int InnerFunction::degree() const {
  int d = 0;
  for (const auto& z : zeros_) d += z.multiplicity;
  return d;
}

std::vector<cplx> InnerFunction::expanded_zeros() const {
  std::vector<cplx> out;
  for (const auto& z : zeros_)
    for (int k = 0; k < z.multiplicity; ++k) out.push_back(z.location);
  return out;
}

bool InnerFunction::well_conditioned(double cap) const {
  return std::all_of(zeros_.begin(), zeros_.end(),
                     [&](const Zero& z) { return std::abs(z.location) <= cap; });
}

InnerFunction InnerFunction::with_constant(cplx c) const {
  InnerFunction out = *this;
  if (std::abs(std::abs(c) - 1.0) > 1e-9)
    throw Error(ErrorKind::invalid_input, "inner function constant must be unimodular");
  out.constant_ = c;
  return out;
}

RationalFunction InnerFunction::to_rational() const {
  const auto zs = expanded_zeros();
  Polynomial num = Polynomial::from_roots(zs, constant_);
  Polynomial den(1.0);
  for (cplx a : zs) den *= Polynomial{1.0, -std::conj(a)};
  return RationalFunction::unreduced(std::move(num), std::move(den));
}

RootSet InnerFunction::zero_set() const {
  RootSet out;
  for (const auto& z : zeros_) out.roots.push_back({z.location, z.multiplicity});
  return out;
}

cplx inner_eval(const InnerFunction& u, cplx z) {
  cplx value = u.constant();
  for (const auto& zero : u.zeros()) {
    const cplx den = 1.0 - std::conj(zero.location) * z;
    if (std::abs(den) <= std::numeric_limits<double>::epsilon())
      throw Error(ErrorKind::pole, "inner_eval at a pole " + describe(z));
    const cplx factor = (z - zero.location) / den;
    for (int k = 0; k < zero.multiplicity; ++k) value *= factor;
  }
  return value;
}

InnerFunction inner_mul(const InnerFunction& u, const InnerFunction& v, const Tolerances& tol) {
  std::vector<Zero> zeros = u.zeros();
  zeros.insert(zeros.end(), v.zeros().begin(), v.zeros().end());
  cplx c = u.constant() * v.constant();
  return InnerFunction(std::move(zeros), c / std::abs(c), tol);
}

InnerFunction inner_div(const InnerFunction& u, const InnerFunction& d, const Tolerances& tol) {
  std::vector<Zero> pool = u.zeros();
  for (const auto& z : d.zeros()) {
    int want = z.multiplicity;
    while (want > 0) {
      const auto hit = nearest_available(pool, z.location, tol.pair);
      if (hit == pool.size())
        throw Error(ErrorKind::divisibility, "inner_div: unmatched zero " + describe(z.location));
      const int take = std::min(want, pool[hit].multiplicity);
      pool[hit].multiplicity -= take;
      want -= take;
    }
  }
  std::erase_if(pool, [](const Zero& z) { return z.multiplicity == 0; });
  cplx c = u.constant() / d.constant();
  return InnerFunction(std::move(pool), c / std::abs(c), tol);
}

InnerFunction inner_gcd(const InnerFunction& u, const InnerFunction& v, const Tolerances& tol) {
  std::vector<Zero> pool = v.zeros();
  std::vector<Zero> common;
  for (const auto& z : u.zeros()) {
    int want = z.multiplicity;
    int got = 0;
    while (want > 0) {
      const auto hit = nearest_available(pool, z.location, tol.pair);
      if (hit == pool.size()) break;
      const int take = std::min(want, pool[hit].multiplicity);
      pool[hit].multiplicity -= take;
      want -= take;
      got += take;
    }
    if (got > 0) common.push_back({z.location, got});
  }
  return InnerFunction(std::move(common), 1.0, tol);
}

bool relatively_prime(const InnerFunction& u, const InnerFunction& v, const Tolerances& tol) {
  return inner_gcd(u, v, tol).degree() == 0;
}

bool divides(const InnerFunction& d, const InnerFunction& u, const Tolerances& tol) {
  try {
    inner_div(u, d, tol);
    return true;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::divisibility) throw;
    return false;
  }
}

bool equal_up_to_constant(const InnerFunction& u, const InnerFunction& v, const Tolerances& tol) {
  return u.degree() == v.degree() && inner_gcd(u, v, tol).degree() == u.degree();
}

InnerOuter inner_outer_factorize(const RationalFunction& f, const Tolerances& tol) {
  for (const auto& pole : f.poles(tol).roots) {
    if (std::abs(pole.location) <= 1.0 + tol.pair)
      throw Error(ErrorKind::not_in_hardy,
                  "inner_outer_factorize: pole in the closed disk at " + describe(pole.location));
  }
  if (f.is_zero() || f.numerator().degree() == 0) return {InnerFunction{}, f};

  std::vector<Zero> inside;
  std::vector<cplx> inside_expanded;
  for (const auto& r : poly_roots(f.numerator(), tol).roots) {
    const double mod = std::abs(r.location);
    if (std::abs(mod - 1.0) <= tol.pair)
      throw Error(ErrorKind::boundary_zero,
                  "inner_outer_factorize: zero on the unit circle at " + describe(r.location));
    if (mod < 1.0) {
      inside.push_back({r.location, r.multiplicity});
      for (int k = 0; k < r.multiplicity; ++k) inside_expanded.push_back(r.location);
    }
  }
  if (inside.empty()) return {InnerFunction{}, f};

  Polynomial num = divmod(f.numerator(), Polynomial::from_roots(inside_expanded)).first;
  for (cplx a : inside_expanded) num *= Polynomial{1.0, -std::conj(a)};
  return {InnerFunction(std::move(inside), 1.0, tol), RationalFunction(num, f.denominator(), tol)};
}

RationalFunction SmirnovTriple::reconstruct(const Tolerances& tol) const {
  return rat_arith(RatOp::div, b, rat_arith(RatOp::mul, v.to_rational(), a, tol), tol);
}

SmirnovTriple smirnov_canonical(const RationalFunction& phi, const Tolerances& tol) {
  if (phi.is_zero()) return {RationalFunction{}, InnerFunction{}, RationalFunction(1.0)};

  const Polynomial& p = phi.numerator();
  const Polynomial& q = phi.denominator();

  std::vector<Zero> inside;
  std::vector<cplx> inside_expanded;
  if (q.degree() > 0) {
    for (const auto& r : poly_roots(q, tol).roots) {
      const double mod = std::abs(r.location);
      if (std::abs(mod - 1.0) <= tol.pair)
        throw Error(ErrorKind::boundary_zero,
                    "smirnov_canonical: denominator zero on the unit circle at " + describe(r.location));
      if (mod < 1.0) {
        inside.push_back({r.location, r.multiplicity});
        for (int k = 0; k < r.multiplicity; ++k) inside_expanded.push_back(r.location);
      }
    }
  }

  // q = v * q_out with q_out a polynomial free of zeros in the closed disk.
  Polynomial q_out = divmod(q, Polynomial::from_roots(inside_expanded)).first;
  for (cplx a : inside_expanded) q_out *= Polynomial{1.0, -std::conj(a)};
  const cplx at_zero = q_out(0.0);
  const cplx phase = at_zero / std::abs(at_zero);
  q_out *= std::conj(phase);
  const InnerFunction v(std::move(inside), phase, tol);

  LaurentPolynomial weight = LaurentPolynomial::abs_squared(p);
  weight += LaurentPolynomial::abs_squared(q_out);
  const Polynomial s = fejer_riesz(weight, tol);

  SmirnovTriple out{RationalFunction(p, s, tol), v, RationalFunction(q_out, s, tol)};

  const Vector pts = circle_points(kSmirnovSamples);
  double worst = 0.0;
  for (int k = 0; k < kSmirnovSamples; ++k)
    worst = std::max(worst, std::abs(std::norm(out.a(pts[k])) + std::norm(out.b(pts[k])) - 1.0));
  if (worst > tol.fr)
    throw Error(ErrorKind::numerical_failure, "smirnov_canonical: |a|^2 + |b|^2 deviates from 1");
  return out;
}

bool in_local_smirnov(const RationalFunction& phi, const InnerFunction& u, const Tolerances& tol) {
  return relatively_prime(smirnov_canonical(phi, tol).v, u, tol);
}

}  // namespace mslab
