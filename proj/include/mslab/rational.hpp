#pragma once

#include <span>

#include "mslab/polynomial.hpp"

namespace mslab {

/// Quotient of complex polynomials kept in reduced form.
///
/// Construction cancels numerator/denominator roots that pair within
/// tol.pair and makes the denominator monic. The zero function is stored
/// as 0/1.
class RationalFunction {
public:
  RationalFunction() : den_(1.0) {}
  RationalFunction(cplx c) : num_(c), den_(1.0) {}  // NOLINT: constants convert implicitly
  RationalFunction(Polynomial num);                 // NOLINT: polynomials convert implicitly
  RationalFunction(Polynomial num, Polynomial den, const Tolerances& tol = {});

  /// Skips root-based reduction; the caller guarantees no common roots.
  static RationalFunction unreduced(Polynomial num, Polynomial den);
  /// Cancels common factors only at the given candidate points, using
  /// vanishing orders instead of a general root search. Suited to
  /// expressions whose possible cancellations are known by construction.
  static RationalFunction cancel_at(Polynomial num, Polynomial den, std::span<const cplx> points,
                                    double rel = 1e-9);

  const Polynomial& numerator() const { return num_; }
  const Polynomial& denominator() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.degree() == 0; }

  /// Throws ErrorKind::pole when the denominator vanishes at z.
  cplx operator()(cplx z) const;

  /// Poles (denominator roots) with multiplicity.
  RootSet poles(const Tolerances& tol = {}) const;
  /// True when every pole lies outside the closed disk by more than tol.pair.
  bool analytic_on_closed_disk(const Tolerances& tol = {}) const;

private:
  void normalize();
  Polynomial num_;
  Polynomial den_;
};

enum class RatOp { add, mul, div, compose_with_moebius };

/// Arithmetic on reduced rational functions. For compose_with_moebius the
/// result is f(g(z)) and g must be a nondegenerate Moebius map.
RationalFunction rat_arith(RatOp op, const RationalFunction& f, const RationalFunction& g,
                           const Tolerances& tol = {});

RationalFunction operator+(const RationalFunction& f, const RationalFunction& g);
RationalFunction operator-(const RationalFunction& f, const RationalFunction& g);
RationalFunction operator*(const RationalFunction& f, const RationalFunction& g);
RationalFunction operator/(const RationalFunction& f, const RationalFunction& g);

}  // namespace mslab
