#pragma once

#include <vector>

#include "mslab/rational.hpp"

namespace mslab {

struct Zero {
  cplx location;
  int multiplicity = 1;
};

/// Finite Blaschke product c * prod ((z - a) / (1 - conj(a) z))^m.
///
/// Zeros keep their insertion order (model-space bases depend on it);
/// locations within tol.pair of each other are merged on construction.
class InnerFunction {
public:
  InnerFunction() = default;
  explicit InnerFunction(std::vector<Zero> zeros, cplx constant = 1.0, const Tolerances& tol = {});

  /// b_a^multiplicity
  static InnerFunction blaschke(cplx a, int multiplicity = 1);
  /// z^k
  static InnerFunction power(int k);

  cplx constant() const { return constant_; }
  const std::vector<Zero>& zeros() const { return zeros_; }
  int degree() const;
  /// Zeros repeated by multiplicity, in storage order.
  std::vector<cplx> expanded_zeros() const;
  /// All zeros have modulus at most `cap`.
  bool well_conditioned(double cap = 0.95) const;
  InnerFunction with_constant(cplx c) const;

  RationalFunction to_rational() const;
  RootSet zero_set() const;

private:
  cplx constant_ = 1.0;
  std::vector<Zero> zeros_;
};

cplx inner_eval(const InnerFunction& u, cplx z);
InnerFunction inner_mul(const InnerFunction& u, const InnerFunction& v, const Tolerances& tol = {});
/// u / d; throws ErrorKind::divisibility naming the first unmatched zero.
InnerFunction inner_div(const InnerFunction& u, const InnerFunction& d, const Tolerances& tol = {});
/// Greatest common inner divisor, constant normalized to 1.
InnerFunction inner_gcd(const InnerFunction& u, const InnerFunction& v, const Tolerances& tol = {});
bool relatively_prime(const InnerFunction& u, const InnerFunction& v, const Tolerances& tol = {});
/// Same zeros (paired within tol.pair, equal multiplicities); constants ignored.
bool equal_up_to_constant(const InnerFunction& u, const InnerFunction& v, const Tolerances& tol = {});
bool divides(const InnerFunction& d, const InnerFunction& u, const Tolerances& tol = {});

struct InnerOuter {
  InnerFunction inner;
  RationalFunction outer;
};

/// f = inner * outer with the inner constant fixed to 1.
InnerOuter inner_outer_factorize(const RationalFunction& f, const Tolerances& tol = {});

/// phi = b / (v a) with |a|^2 + |b|^2 = 1 on the circle, a outer, a(0) > 0.
struct SmirnovTriple {
  RationalFunction b;
  InnerFunction v;
  RationalFunction a;

  /// b / (v a) as a single rational function.
  RationalFunction reconstruct(const Tolerances& tol = {}) const;
};

SmirnovTriple smirnov_canonical(const RationalFunction& phi, const Tolerances& tol = {});

/// phi lies in N+_u: the inner part of its canonical denominator is
/// relatively prime to u.
bool in_local_smirnov(const RationalFunction& phi, const InnerFunction& u, const Tolerances& tol = {});

}  // namespace mslab
