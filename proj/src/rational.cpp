#include "mslab/rational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace mslab {

namespace {

// Greedy nearest matching of two root sets; returns the common part.
std::vector<cplx> common_roots(const RootSet& a, const RootSet& b, double pair_tol) {
  std::vector<Root> pool = b.roots;
  std::vector<cplx> common;
  for (const auto& r : a.roots) {
    int want = r.multiplicity;
    while (want > 0) {
      std::size_t best = pool.size();
      double best_dist = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < pool.size(); ++j) {
        if (pool[j].multiplicity == 0) continue;
        const double d = std::abs(pool[j].location - r.location);
        if (d <= pair_tol && d < best_dist) {
          best = j;
          best_dist = d;
        }
      }
      if (best == pool.size()) break;
      const int take = std::min(want, pool[best].multiplicity);
      for (int k = 0; k < take; ++k) common.push_back(r.location);
      pool[best].multiplicity -= take;
      want -= take;
    }
  }
  return common;
}

}  // namespace

RationalFunction::RationalFunction(Polynomial num) : num_(std::move(num)), den_(1.0) {}

RationalFunction::RationalFunction(Polynomial num, Polynomial den, const Tolerances& tol)
    : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw Error(ErrorKind::degenerate_input, "rational function with zero denominator");
  if (!num_.is_zero() && num_.degree() > 0 && den_.degree() > 0) {
    const auto common = common_roots(poly_roots(num_, tol), poly_roots(den_, tol), tol.pair);
    if (!common.empty()) {
      const Polynomial factor = Polynomial::from_roots(common);
      num_ = divmod(num_, factor).first;
      den_ = divmod(den_, factor).first;
    }
  }
  normalize();
}

RationalFunction RationalFunction::unreduced(Polynomial num, Polynomial den) {
  if (den.is_zero()) throw Error(ErrorKind::degenerate_input, "rational function with zero denominator");
  RationalFunction out;
  out.num_ = std::move(num);
  out.den_ = std::move(den);
  out.normalize();
  return out;
}

RationalFunction RationalFunction::cancel_at(Polynomial num, Polynomial den,
                                             std::span<const cplx> points, double rel) {
  if (den.is_zero()) throw Error(ErrorKind::degenerate_input, "rational function with zero denominator");
  if (!num.is_zero()) {
    std::vector<cplx> seen;
    for (cplx pt : points) {
      if (std::any_of(seen.begin(), seen.end(), [&](cplx s) { return s == pt; })) continue;
      seen.push_back(pt);
      const int k = std::min(vanishing_order(num, pt, rel), vanishing_order(den, pt, rel));
      if (k == 0) continue;
      const Polynomial factor = Polynomial::from_roots(std::vector<cplx>(static_cast<std::size_t>(k), pt));
      num = divmod(num, factor).first;
      den = divmod(den, factor).first;
    }
  }
  return unreduced(std::move(num), std::move(den));
}

void RationalFunction::normalize() {
  if (num_.is_zero()) {
    den_ = Polynomial(1.0);
    return;
  }
  const cplx lead = den_.leading();
  num_ *= 1.0 / lead;
  den_ *= 1.0 / lead;
}

cplx RationalFunction::operator()(cplx z) const {
  const cplx d = den_(z);
  const double floor = std::numeric_limits<double>::epsilon() * den_.magnitude_bound(z);
  if (std::abs(d) <= floor) {
    std::ostringstream msg;
    msg << "rational function evaluated at a pole " << z;
    throw Error(ErrorKind::pole, msg.str());
  }
  return num_(z) / d;
}

RootSet RationalFunction::poles(const Tolerances& tol) const {
  if (den_.degree() <= 0) return {};
  return poly_roots(den_, tol);
}

bool RationalFunction::analytic_on_closed_disk(const Tolerances& tol) const {
  for (const auto& r : poles(tol).roots)
    if (std::abs(r.location) <= 1.0 + tol.pair) return false;
  return true;
}

RationalFunction rat_arith(RatOp op, const RationalFunction& f, const RationalFunction& g,
                           const Tolerances& tol) {
  const auto& fn = f.numerator();
  const auto& fd = f.denominator();
  const auto& gn = g.numerator();
  const auto& gd = g.denominator();
  switch (op) {
    case RatOp::add:
      // Cancellation in the sum leaves rounding-level leading coefficients.
      return RationalFunction((fn * gd + gn * fd).trimmed(1e-14), fd * gd, tol);
    case RatOp::mul:
      return RationalFunction(fn * gn, fd * gd, tol);
    case RatOp::div:
      if (g.is_zero()) throw Error(ErrorKind::degenerate_input, "division by the zero function");
      return RationalFunction(fn * gd, fd * gn, tol);
    case RatOp::compose_with_moebius: {
      if (gn.degree() > 1 || gd.degree() > 1)
        throw Error(ErrorKind::degenerate_input, "compose_with_moebius: g is not a Moebius map");
      // g = (a z + b) / (c z + d)
      const cplx a = gn[1], b = gn[0], c = gd[1], d = gd[0];
      if (std::abs(a * d - b * c) <= 1e-14 * std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)}))
        throw Error(ErrorKind::degenerate_input, "compose_with_moebius: degenerate Moebius map");
      const int deg = std::max(fn.degree(), fd.degree());
      auto homogenize = [&](const Polynomial& p) {
        Polynomial acc;
        for (int k = 0; k <= p.degree(); ++k) acc += p[k] * gn.pow(k) * gd.pow(deg - k);
        return acc;
      };
      return RationalFunction(homogenize(fn), homogenize(fd), tol);
    }
  }
  throw Error(ErrorKind::invalid_input, "rat_arith: unknown operation");
}

RationalFunction operator+(const RationalFunction& f, const RationalFunction& g) {
  return rat_arith(RatOp::add, f, g);
}

RationalFunction operator-(const RationalFunction& f, const RationalFunction& g) {
  return rat_arith(RatOp::add, f, RationalFunction::unreduced(-g.numerator(), g.denominator()));
}

RationalFunction operator*(const RationalFunction& f, const RationalFunction& g) {
  return rat_arith(RatOp::mul, f, g);
}

RationalFunction operator/(const RationalFunction& f, const RationalFunction& g) {
  return rat_arith(RatOp::div, f, g);
}

}  // namespace mslab
