#include <algorithm>

#include "doctest.h"
#include "mslab/polynomial.hpp"
#include "test_support.hpp"

using namespace mslab;
using mslab::test::near;

namespace {

const Root* find_root(const RootSet& rs, cplx at, double tol) {
  for (const auto& r : rs.roots)
    if (near(r.location, at, tol)) return &r;
  return nullptr;
}

}  // namespace

TEST_CASE("poly_roots: z^2 + 1") {
  const RootSet rs = poly_roots(Polynomial{1.0, 0.0, 1.0});
  REQUIRE(rs.roots.size() == 2);
  CHECK(find_root(rs, {0, 1}, 1e-12) != nullptr);
  CHECK(find_root(rs, {0, -1}, 1e-12) != nullptr);
}

TEST_CASE("poly_roots: perfect square z^2 - 2z + 1") {
  const RootSet rs = poly_roots(Polynomial{1.0, -2.0, 1.0});
  REQUIRE(rs.roots.size() == 1);
  CHECK(rs.roots[0].multiplicity == 2);
  CHECK(near(rs.roots[0].location, 1.0, 1e-9));
}

TEST_CASE("poly_roots: z^3 - 0.5 z^2 = z^2 (z - 0.5)") {
  // Oracle: expanding the claimed factorization reproduces the input.
  const auto expanded = test::expand_roots({0.0, 0.0, 0.5});
  const Polynomial p{0.0, 0.0, -0.5, 1.0};
  for (int k = 0; k <= 3; ++k) CHECK(near(expanded[static_cast<std::size_t>(k)], p[k], 1e-15));

  const RootSet rs = poly_roots(p);
  REQUIRE(rs.roots.size() == 2);
  const Root* zero = find_root(rs, 0.0, 1e-12);
  const Root* half = find_root(rs, 0.5, 1e-12);
  REQUIRE(zero != nullptr);
  REQUIRE(half != nullptr);
  CHECK(zero->multiplicity == 2);
  CHECK(half->multiplicity == 1);
}

TEST_CASE("poly_roots: higher multiplicities away from the origin") {
  const cplx a{0.3, -0.2};
  const cplx b{-0.5, 0.4};
  const Polynomial p = Polynomial::from_roots(std::vector<cplx>{a, a, a, a, b, b, b});
  const RootSet rs = poly_roots(p);
  REQUIRE(rs.roots.size() == 2);
  const Root* ra = find_root(rs, a, 1e-7);
  const Root* rb = find_root(rs, b, 1e-7);
  REQUIRE(ra != nullptr);
  REQUIRE(rb != nullptr);
  CHECK(ra->multiplicity == 4);
  CHECK(rb->multiplicity == 3);
}

TEST_CASE("poly_roots: distinct close roots stay distinct") {
  const Polynomial p = Polynomial::from_roots(std::vector<cplx>{0.4, 0.4 + 1e-4, -0.2});
  const RootSet rs = poly_roots(p);
  CHECK(rs.roots.size() == 3);
}

TEST_CASE("poly_roots: zero polynomial is degenerate") {
  CHECK_THROWS_AS(poly_roots(Polynomial{}), Error);
  try {
    poly_roots(Polynomial{});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::degenerate_input);
  }
}

TEST_CASE("poly_roots: reconstruction on random polynomials") {
  Rng rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    const int deg = rng.uniform_int(1, 10);
    std::vector<cplx> c(static_cast<std::size_t>(deg) + 1);
    for (auto& x : c) x = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const Polynomial p(c);
    const RootSet rs = poly_roots(p);
    REQUIRE(rs.degree() == p.degree());
    const auto rebuilt = test::expand_roots(rs.expanded());
    const double scale = p.max_abs_coefficient();
    for (int k = 0; k <= p.degree(); ++k)
      CHECK(std::abs(rebuilt[static_cast<std::size_t>(k)] * p.leading() - p[k]) <= 1e-7 * scale);
  }
}

TEST_CASE("divmod: long division") {
  const auto [q, r] = divmod(Polynomial{-0.25, 0.0, 1.0}, Polynomial{-0.5, 1.0});
  CHECK(q.degree() == 1);
  CHECK(near(q[0], 0.5, 1e-15));
  CHECK(near(q[1], 1.0, 1e-15));
  CHECK(r.is_zero());
}

TEST_CASE("vanishing_order at known points") {
  const Polynomial p = Polynomial::from_roots(std::vector<cplx>{0.5, 0.5, 0.5, -0.1});
  CHECK(vanishing_order(p, 0.5) == 3);
  CHECK(vanishing_order(p, -0.1) == 1);
  CHECK(vanishing_order(p, 0.2) == 0);
}

TEST_CASE("fejer_riesz: 5 + 4 cos t factors as 2 + z") {
  // |2 + e^{it}|^2 = 4 + 4 cos t + 1.
  const Polynomial s = fejer_riesz({{2.0, 5.0, 2.0}});
  REQUIRE(s.degree() == 1);
  CHECK(near(s[0], 2.0, 1e-12));
  CHECK(near(s[1], 1.0, 1e-12));
}

TEST_CASE("fejer_riesz: constants") {
  const Polynomial one = fejer_riesz({{1.0}});
  REQUIRE(one.degree() == 0);
  CHECK(near(one[0], 1.0, 1e-15));
  const Polynomial two = fejer_riesz({{2.0}});
  CHECK(near(two[0], std::sqrt(2.0), 1e-15));
}

TEST_CASE("fejer_riesz: negativity reports the failing angle") {
  // 1 + 2 cos t is negative near t = pi.
  try {
    fejer_riesz({{1.0, 1.0, 1.0}});
    FAIL("expected NotFactorableError");
  } catch (const NotFactorableError& e) {
    CHECK(e.kind() == ErrorKind::not_factorable);
    CHECK(std::cos(e.failing_angle) < -0.5);
  }
}

TEST_CASE("fejer_riesz: random strictly positive inputs") {
  Rng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const int deg = rng.uniform_int(1, 6);
    std::vector<cplx> c(static_cast<std::size_t>(deg) + 1);
    for (auto& x : c) x = rng.complex_normal();
    LaurentPolynomial laurent = LaurentPolynomial::abs_squared(Polynomial(c));
    laurent.coefficients[static_cast<std::size_t>(laurent.half_degree())] += rng.uniform(1e-2, 1.0);

    const Polynomial s = fejer_riesz(laurent);
    CHECK(std::abs(s(0.0).imag()) <= 1e-12 * std::abs(s(0.0)));
    CHECK(s(0.0).real() > 0.0);
    for (const auto& r : poly_roots(s).roots) CHECK(std::abs(r.location) > 1.0);
    double worst = 0.0;
    double peak = 0.0;
    for (int k = 0; k < 512; ++k) {
      const cplx z = std::polar(1.0, 2.0 * std::numbers::pi * k / 512);
      const double target = laurent(z).real();
      peak = std::max(peak, target);
      worst = std::max(worst, std::abs(std::norm(s(z)) - target));
    }
    CHECK(worst <= 1e-8 * peak);
  }
}
