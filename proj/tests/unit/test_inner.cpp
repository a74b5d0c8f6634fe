#include "doctest.h"
#include "mslab/inner.hpp"
#include "test_support.hpp"

using namespace mslab;
using mslab::test::near;

namespace {

InnerFunction b(cplx a) { return InnerFunction::blaschke(a); }

InnerFunction random_inner(Rng& rng, int max_degree) {
  std::vector<Zero> zeros;
  const int deg = rng.uniform_int(0, max_degree);
  for (int k = 0; k < deg; ++k) zeros.push_back({rng.in_disk(0.95), 1});
  return InnerFunction(zeros, std::polar(1.0, rng.uniform(0, 6.28)));
}

RationalFunction rational_from_roots(const std::vector<cplx>& num, const std::vector<cplx>& den,
                                     cplx lead = 1.0) {
  return RationalFunction(Polynomial::from_roots(num, lead), Polynomial::from_roots(den));
}

double max_normalization_defect(const SmirnovTriple& t) {
  double worst = 0.0;
  for (int k = 0; k < 512; ++k) {
    const cplx z = std::polar(1.0, 2.0 * std::numbers::pi * k / 512);
    worst = std::max(worst, std::abs(std::norm(t.a(z)) + std::norm(t.b(z)) - 1.0));
  }
  return worst;
}

}  // namespace

TEST_CASE("inner_eval examples") {
  CHECK(near(inner_eval(b(0.5), 0.0), -0.5, 1e-15));
  CHECK(near(inner_eval(InnerFunction::power(2), {0, 1}), -1.0, 1e-15));
  const InnerFunction u = inner_mul(InnerFunction::power(1), b(0.5));
  // Direct evaluation oracle: 1 * (1 - 0.5) / (1 - 0.5) = 1.
  CHECK(near(inner_eval(u, 1.0), 1.0, 1e-15));
  CHECK_THROWS_AS(inner_eval(b(0.5), 2.0), Error);
}

TEST_CASE("inner_mul") {
  const InnerFunction zz = inner_mul(InnerFunction::power(1), InnerFunction::power(1));
  REQUIRE(zz.zeros().size() == 1);
  CHECK(zz.zeros()[0].multiplicity == 2);
  CHECK(equal_up_to_constant(inner_mul(b(0.5), InnerFunction{}), b(0.5)));
  const InnerFunction mixed = inner_mul(InnerFunction::power(1), b(0.3));
  CHECK(mixed.degree() == 2);
  CHECK(mixed.zeros().size() == 2);
}

TEST_CASE("inner_div") {
  CHECK(equal_up_to_constant(inner_div(InnerFunction::power(3), InnerFunction::power(1)), InnerFunction::power(2)));
  const InnerFunction u = inner_mul(InnerFunction::power(2), b(0.5));
  CHECK(equal_up_to_constant(inner_div(u, b(0.5)), InnerFunction::power(2)));
  try {
    inner_div(InnerFunction::power(2), b(0.5));
    FAIL("expected divisibility error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::divisibility);
    CHECK(std::string(e.what()).find("0.5") != std::string::npos);
  }
}

TEST_CASE("inner_gcd and relatively_prime") {
  const InnerFunction u = inner_mul(InnerFunction::power(2), b(0.5));
  const InnerFunction v = inner_mul(InnerFunction::power(1), b(0.3));
  CHECK(equal_up_to_constant(inner_gcd(u, v), InnerFunction::power(1)));
  CHECK(near(inner_gcd(u, v).constant(), 1.0, 0.0));
  CHECK(equal_up_to_constant(inner_gcd(u, u), u));
  CHECK(inner_gcd(InnerFunction::power(2), b(0.5)).degree() == 0);

  CHECK(relatively_prime(InnerFunction::power(2), b(0.5)));
  CHECK_FALSE(relatively_prime(InnerFunction::power(2), InnerFunction::power(1)));
  // Pairing tolerance boundary: 1e-3 apart is coprime, 1e-9 apart is not.
  CHECK(relatively_prime(b(0.5), b(0.5 + 1e-3)));
  CHECK_FALSE(relatively_prime(b(0.5), b(0.5 + 1e-9)));
}

TEST_CASE("lattice laws on random instances") {
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const InnerFunction u = random_inner(rng, 6);
    const InnerFunction v = random_inner(rng, 6);
    const InnerFunction g = inner_gcd(u, v);
    CHECK(divides(g, u));
    CHECK(divides(g, v));
    const InnerFunction d = random_inner(rng, 6);
    CHECK(equal_up_to_constant(inner_div(inner_mul(u, d), d), u));
    for (int k = 0; k < 64; ++k) {
      const cplx z = std::polar(1.0, 2.0 * std::numbers::pi * k / 64);
      CHECK(std::abs(std::abs(inner_eval(u, z)) - 1.0) <= 1e-9);
    }
  }
}

TEST_CASE("inner function validation") {
  CHECK_THROWS_AS(InnerFunction({{1.2, 1}}), Error);
  CHECK_THROWS_AS(InnerFunction({{0.2, 0}}), Error);
  CHECK_THROWS_AS(InnerFunction({}, 2.0), Error);
  CHECK_FALSE(InnerFunction({{0.97, 1}}).well_conditioned());
  CHECK(InnerFunction({{0.9, 1}}).well_conditioned());
}

TEST_CASE("inner_outer_factorize") {
  // f = z - 0.5 = b_{0.5} * (1 - 0.5 z).
  const RationalFunction f(Polynomial{-0.5, 1.0});
  const InnerOuter io = inner_outer_factorize(f);
  CHECK(equal_up_to_constant(io.inner, b(0.5)));
  for (int k = 0; k < 32; ++k) {
    const cplx z = std::polar(1.0, 2.0 * std::numbers::pi * k / 32);
    CHECK(near(inner_eval(io.inner, z) * io.outer(z), f(z), 1e-12));
    CHECK(near(io.outer(z), 1.0 - 0.5 * z, 1e-12));
  }

  const InnerOuter outside = inner_outer_factorize(RationalFunction(Polynomial{-2.0, 1.0}));
  CHECK(outside.inner.degree() == 0);
  CHECK(near(outside.inner.constant(), 1.0, 0.0));
  CHECK(near(outside.outer(0.0), -2.0, 1e-15));

  const InnerOuter one = inner_outer_factorize(RationalFunction(1.0));
  CHECK(one.inner.degree() == 0);
  CHECK(near(one.outer(0.3), 1.0, 0.0));

  try {
    inner_outer_factorize(RationalFunction(Polynomial{-1.0, 1.0}));
    FAIL("expected boundary-zero error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::boundary_zero);
  }
  CHECK_THROWS_AS(inner_outer_factorize(RationalFunction(Polynomial{1.0}, Polynomial{-0.5, 1.0})), Error);
}

TEST_CASE("smirnov_canonical: 1/z") {
  const SmirnovTriple t = smirnov_canonical(RationalFunction(Polynomial{1.0}, Polynomial{0.0, 1.0}));
  CHECK(equal_up_to_constant(t.v, InnerFunction::power(1)));
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(near(t.a(0.0), r, 1e-12));
  CHECK(near(t.a(0.7), r, 1e-12));
  for (int k = 0; k < 8; ++k) {
    const cplx z = std::polar(1.0, 0.3 + k);
    CHECK(near(t.b(z) / (inner_eval(t.v, z) * t.a(z)), 1.0 / z, 1e-12));
  }
  CHECK(std::abs(std::abs(t.b(0.2)) - r) <= 1e-12);
}

TEST_CASE("smirnov_canonical: zero function") {
  const SmirnovTriple t = smirnov_canonical(RationalFunction{});
  CHECK(t.b.is_zero());
  CHECK(t.v.degree() == 0);
  CHECK(near(t.a(0.4), 1.0, 0.0));
}

TEST_CASE("smirnov_canonical: outer denominator") {
  // phi = 1 / (1 - z/2); |a|^2 = |1 - z/2|^2 / (1 + |1 - z/2|^2) on the circle.
  const RationalFunction phi(Polynomial{1.0}, Polynomial{1.0, -0.5});
  const SmirnovTriple t = smirnov_canonical(phi);
  // Monic denominator z - 2 leaves the unimodular constant -1 in v.
  CHECK(t.v.degree() == 0);
  CHECK(max_normalization_defect(t) <= 1e-8);
  for (int k = 0; k < 512; ++k) {
    const cplx z = std::polar(1.0, 2.0 * std::numbers::pi * k / 512);
    const double w = std::norm(1.0 - 0.5 * z);
    CHECK(std::abs(std::norm(t.a(z)) - w / (1.0 + w)) <= 1e-10);
    CHECK(near(t.b(z), t.a(z) * inner_eval(t.v, z) * phi(z), 1e-10));
  }
  CHECK(t.a(0.0).real() > 0.0);
}

TEST_CASE("smirnov_canonical: boundary pole") {
  try {
    smirnov_canonical(RationalFunction(Polynomial{1.0}, Polynomial{-1.0, 1.0}));
    FAIL("expected boundary-zero error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::boundary_zero);
  }
}

TEST_CASE("smirnov_canonical invariants on random rationals") {
  Rng rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    auto root = [&] {
      for (;;) {
        const cplx r = rng.in_disk(2.5);
        if (std::abs(std::abs(r) - 1.0) > 0.05) return r;
      }
    };
    std::vector<cplx> num(static_cast<std::size_t>(rng.uniform_int(0, 4)));
    std::vector<cplx> den(static_cast<std::size_t>(rng.uniform_int(0, 4)));
    for (auto& r : num) r = root();
    for (auto& r : den) r = root();
    const RationalFunction phi = rational_from_roots(num, den, rng.complex_normal());
    const SmirnovTriple t = smirnov_canonical(phi);

    CHECK(max_normalization_defect(t) <= 1e-8);
    CHECK(std::abs(t.a(0.0).imag()) <= 1e-12);
    CHECK(t.a(0.0).real() > 0.0);
    for (const auto& r : poly_roots(t.a.numerator()).roots) CHECK(std::abs(r.location) > 1.0);
    const InnerOuter b_parts = inner_outer_factorize(t.b);
    CHECK(relatively_prime(t.v, b_parts.inner));

    for (int k = 0; k < 16; ++k) {
      const cplx z = std::polar(1.0, 0.2 + 2.0 * std::numbers::pi * k / 16);
      const cplx expect = phi(z);
      CHECK(std::abs(t.b(z) / (inner_eval(t.v, z) * t.a(z)) - expect) <= 1e-8 * (1.0 + std::abs(expect)));
    }

    // Idempotence.
    const SmirnovTriple again = smirnov_canonical(t.reconstruct());
    CHECK(equal_up_to_constant(again.v, t.v));
    for (int k = 0; k < 16; ++k) {
      const cplx z = std::polar(1.0, 0.5 + 2.0 * std::numbers::pi * k / 16);
      CHECK(near(again.a(z), t.a(z), 1e-8));
      CHECK(near(again.b(z) / inner_eval(again.v, z), t.b(z) / inner_eval(t.v, z), 1e-8));
    }
  }
}

TEST_CASE("in_local_smirnov") {
  const RationalFunction inv_z(Polynomial{1.0}, Polynomial{0.0, 1.0});
  CHECK_FALSE(in_local_smirnov(inv_z, InnerFunction::power(2)));
  CHECK(in_local_smirnov(inv_z, b(0.5)));
  const RationalFunction outer(Polynomial{1.0}, Polynomial{1.0, -0.5});
  CHECK(in_local_smirnov(outer, InnerFunction::power(3)));
  CHECK(in_local_smirnov(outer, b(cplx(0.1, 0.4))));
}
