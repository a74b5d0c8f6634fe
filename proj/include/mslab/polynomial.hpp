#pragma once

#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include "mslab/common.hpp"

namespace mslab {

/// Dense complex polynomial, coefficients stored lowest degree first.
///
/// The zero polynomial has an empty coefficient list and degree -1. Exact
/// trailing zeros are always trimmed, so the leading coefficient of a
/// nonzero polynomial is nonzero.
class Polynomial {
public:
  Polynomial() = default;
  Polynomial(cplx c);  // NOLINT: constants convert implicitly
  explicit Polynomial(std::vector<cplx> coefficients);
  Polynomial(std::initializer_list<cplx> coefficients);

  static Polynomial monomial(int degree, cplx coefficient = 1.0);
  /// lead * prod (z - r_i)
  static Polynomial from_roots(std::span<const cplx> roots, cplx lead = 1.0);

  const std::vector<cplx>& coefficients() const { return coeffs_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  cplx leading() const { return coeffs_.empty() ? cplx{} : coeffs_.back(); }
  cplx operator[](int k) const;

  cplx operator()(cplx z) const;
  /// Horner evaluation of sum |c_k| |z|^k, the scale of rounding error at z.
  double magnitude_bound(cplx z) const;
  double max_abs_coefficient() const;

  Polynomial derivative() const;
  /// Coefficients of w -> p(center + w).
  Polynomial taylor_shift(cplx center) const;
  /// Drops leading coefficients below rel * max |c_k|.
  Polynomial trimmed(double rel) const;
  /// z^deg conj(p(1/conj z)): the reciprocal-conjugate polynomial.
  Polynomial reflected(int degree) const;

  Polynomial& operator+=(const Polynomial& rhs);
  Polynomial& operator-=(const Polynomial& rhs);
  Polynomial& operator*=(const Polynomial& rhs);
  Polynomial& operator*=(cplx s);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Polynomial& b) { return a *= b; }
  friend Polynomial operator*(Polynomial a, cplx s) { return a *= s; }
  friend Polynomial operator*(cplx s, Polynomial a) { return a *= s; }
  Polynomial operator-() const { return *this * cplx{-1.0}; }

  Polynomial pow(int k) const;

private:
  void trim();
  std::vector<cplx> coeffs_;
};

/// Quotient and remainder of polynomial long division.
std::pair<Polynomial, Polynomial> divmod(const Polynomial& num, const Polynomial& den);

struct Root {
  cplx location;
  int multiplicity = 1;
};

/// Roots with multiplicity; distinct locations are separated by more than
/// the pairing tolerance used to build the set.
struct RootSet {
  std::vector<Root> roots;

  int degree() const;
  std::vector<cplx> expanded() const;
};

class RootFindingError : public Error {
public:
  RootFindingError(const std::string& what, std::vector<cplx> best)
      : Error(ErrorKind::numerical_failure, what), best_iterate(std::move(best)) {}

  std::vector<cplx> best_iterate;
};

/// Roots of p by Aberth-Ehrlich simultaneous iteration.
///
/// Exact zeros at the origin are split off first. Iterates within
/// tol.pair of each other form one multiple root. Looser clusters whose
/// Taylor data at the centroid vanish to rounding level are also merged,
/// since higher-order roots only converge to about eps^(1/k).
RootSet poly_roots(const Polynomial& p, const Tolerances& tol = {});

/// Order of vanishing of p at a known point: the number of leading Taylor
/// coefficients at `point` that are below rel times their rounding scale.
int vanishing_order(const Polynomial& p, cplx point, double rel = 1e-9);

/// Laurent polynomial sum_{k=-n}^{n} c_k z^k, stored as c_{-n}, ..., c_n.
struct LaurentPolynomial {
  std::vector<cplx> coefficients;

  int half_degree() const { return (static_cast<int>(coefficients.size()) - 1) / 2; }
  cplx operator()(cplx z) const;
  /// |p|^2 on the circle as a Laurent polynomial.
  static LaurentPolynomial abs_squared(const Polynomial& p);
  LaurentPolynomial& operator+=(const LaurentPolynomial& rhs);
};

class NotFactorableError : public Error {
public:
  NotFactorableError(const std::string& what, double angle)
      : Error(ErrorKind::not_factorable, what), failing_angle(angle) {}

  double failing_angle;
};

/// Outer spectral factor s with |s(e^{it})|^2 = L(t), roots outside the
/// closed disk and s(0) > 0.
Polynomial fejer_riesz(const LaurentPolynomial& laurent, const Tolerances& tol = {});

}  // namespace mslab
