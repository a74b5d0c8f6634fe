#pragma once

#include "mslab/modelspace.hpp"

namespace mslab {

/// phi = psi / chi with psi, chi rational H^infinity functions. The
/// canonical Smirnov triple of phi is computed on construction and is what
/// every operator evaluation uses.
class NevanlinnaFunction {
public:
  NevanlinnaFunction(RationalFunction psi, RationalFunction chi, const Tolerances& tol = {});
  /// phi given directly as a rational function (chi = 1 representation).
  explicit NevanlinnaFunction(const RationalFunction& phi, const Tolerances& tol = {});

  const RationalFunction& psi() const { return psi_; }
  const RationalFunction& chi() const { return chi_; }
  const SmirnovTriple& canonical() const { return canonical_; }
  /// psi / chi as a single reduced rational function.
  RationalFunction as_rational() const;

private:
  RationalFunction psi_;
  RationalFunction chi_;
  SmirnovTriple canonical_;
};

/// h(T) = num(T) den(T)^{-1} for h analytic on the closed disk.
Operator h_of(const Operator& t, const RationalFunction& h, const Tolerances& tol = {});

/// u(T) as the ordered product of Blaschke factors (T - a)(I - conj(a) T)^{-1}.
Operator inner_of_operator(const InnerFunction& u, const Operator& t);

/// Hermite interpolant of h on the zeros of u (deg p < deg u) by confluent
/// Newton divided differences.
Polynomial hermite_interpolant(const RationalFunction& h, const InnerFunction& u,
                               const Tolerances& tol = {});

/// Taylor coefficients h(a), h'(a), ..., h^(order-1)(a)/(order-1)! of a
/// rational function. Throws interpolation_undefined at a pole.
std::vector<cplx> taylor_coefficients(const RationalFunction& h, cplx a, int order);

/// True iff chi(T) is invertible at the rank tolerance.
bool k_infinity_member(const RationalFunction& chi, const Operator& t, const Tolerances& tol = {});

/// phi(T) = chi(T)^{-1} psi(T) with (psi, chi) = (b, v a) from the
/// canonical triple.
Operator nevanlinna_apply(const NevanlinnaFunction& phi, const Operator& t, const Tolerances& tol = {});

/// Ranks r_0 = n, r_1, ... of b_lambda(T)^k, stopping at the first repeat
/// (the last two entries are equal) or after max_power powers. Number of
/// Jordan chains of length >= j at lambda is r_{j-1} - r_j.
std::vector<int> blaschke_rank_sequence(const Matrix& t, cplx lambda, int max_power, const Tolerances& tol = {});

/// Minimal inner function of T from rank sequences of b_lambda(T)^k over
/// the hinted eigenvalues.
InnerFunction minimal_function(const Operator& t, const RootSet& spectrum_hint, const Tolerances& tol = {});

struct DefectClass {
  int n = 0;
  bool is_c0n = false;
  int defect = 0;       // rank(I - T*T)
  int defect_star = 0;  // rank(I - T T*)
  double spectral_radius = 0.0;
};

DefectClass defect_classify(const Operator& t, const Tolerances& tol = {});

}  // namespace mslab
