#include "doctest.h"
#include "mslab/rational.hpp"
#include "test_support.hpp"

using namespace mslab;
using mslab::test::near;

namespace {

RationalFunction random_rational(Rng& rng) {
  auto poly = [&](int deg) {
    std::vector<cplx> c(static_cast<std::size_t>(deg) + 1);
    for (auto& x : c) x = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    return Polynomial(c);
  };
  return RationalFunction(poly(rng.uniform_int(0, 3)), poly(rng.uniform_int(0, 3)));
}

}  // namespace

TEST_CASE("rat_arith: 1/z times z is 1") {
  const RationalFunction inv(Polynomial{1.0}, Polynomial{0.0, 1.0});
  const RationalFunction id(Polynomial{0.0, 1.0});
  const RationalFunction prod = rat_arith(RatOp::mul, inv, id);
  CHECK(prod.numerator().degree() == 0);
  CHECK(prod.denominator().degree() == 0);
  CHECK(near(prod(0.3), 1.0, 1e-14));
}

TEST_CASE("rat_arith: z + 1") {
  const RationalFunction sum = rat_arith(RatOp::add, RationalFunction(Polynomial{0.0, 1.0}), RationalFunction(1.0));
  CHECK(sum.is_polynomial());
  CHECK(near(sum.numerator()[0], 1.0, 1e-15));
  CHECK(near(sum.numerator()[1], 1.0, 1e-15));
}

TEST_CASE("rat_arith: (z^2 - 1/4) / (z - 1/2) = z + 1/2") {
  // Oracle: long division by hand gives quotient z + 0.5 and remainder 0.
  const RationalFunction q = rat_arith(RatOp::div, RationalFunction(Polynomial{-0.25, 0.0, 1.0}),
                                       RationalFunction(Polynomial{-0.5, 1.0}));
  REQUIRE(q.is_polynomial());
  REQUIRE(q.numerator().degree() == 1);
  CHECK(near(q.numerator()[0], 0.5, 1e-12));
  CHECK(near(q.numerator()[1], 1.0, 1e-12));
}

TEST_CASE("rat_arith: division by zero function") {
  try {
    rat_arith(RatOp::div, RationalFunction(1.0), RationalFunction{});
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::degenerate_input);
  }
}

TEST_CASE("rat_arith: compose with a Moebius map") {
  // f(z) = z^2, g = Blaschke factor b_{1/2}.
  const RationalFunction f(Polynomial{0.0, 0.0, 1.0});
  const RationalFunction g = RationalFunction::unreduced(Polynomial{-0.5, 1.0}, Polynomial{1.0, -0.5});
  const RationalFunction h = rat_arith(RatOp::compose_with_moebius, f, g);
  for (int k = 0; k < 16; ++k) {
    const cplx z = std::polar(1.0, 0.1 + 2.0 * std::numbers::pi * k / 16);
    CHECK(near(h(z), std::pow(g(z), 2), 1e-12));
  }
  CHECK_THROWS_AS(rat_arith(RatOp::compose_with_moebius, f, RationalFunction(Polynomial{0.0, 0.0, 1.0})), Error);
}

TEST_CASE("rat_arith agrees pointwise and is reduced") {
  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const RationalFunction f = random_rational(rng);
    const RationalFunction g = random_rational(rng);
    const RationalFunction s = rat_arith(RatOp::add, f, g);
    const RationalFunction p = rat_arith(RatOp::mul, f, g);
    for (int k = 0; k < 16; ++k) {
      const cplx z = std::polar(1.0, 0.37 + 2.0 * std::numbers::pi * k / 16);
      cplx fz, gz;
      try {
        fz = f(z);
        gz = g(z);
      } catch (const Error&) {
        continue;
      }
      const double scale = 1.0 + std::abs(fz) + std::abs(gz) + std::abs(fz * gz);
      CHECK(std::abs(s(z) - (fz + gz)) <= 1e-9 * scale);
      CHECK(std::abs(p(z) - fz * gz) <= 1e-9 * scale);
    }
    // Commutativity and associativity at sampled circle points.
    const RationalFunction h = random_rational(rng);
    const RationalFunction left = rat_arith(RatOp::mul, rat_arith(RatOp::mul, f, g), h);
    const RationalFunction right = rat_arith(RatOp::mul, f, rat_arith(RatOp::mul, h, g));
    const RationalFunction sum_l = rat_arith(RatOp::add, rat_arith(RatOp::add, f, g), h);
    const RationalFunction sum_r = rat_arith(RatOp::add, h, rat_arith(RatOp::add, g, f));
    for (int k = 0; k < 16; ++k) {
      const cplx z = std::polar(1.0, 0.11 + 2.0 * std::numbers::pi * k / 16);
      try {
        const cplx a = left(z), b = right(z);
        CHECK(std::abs(a - b) <= 1e-8 * (1.0 + std::abs(a)));
        const cplx c = sum_l(z), d = sum_r(z);
        CHECK(std::abs(c - d) <= 1e-8 * (1.0 + std::abs(c)));
      } catch (const Error&) {
      }
    }
  }
}

TEST_CASE("reduced form cancels shared roots") {
  const Polynomial common = Polynomial::from_roots(std::vector<cplx>{0.25, cplx(0.1, 0.2)});
  const RationalFunction f(common * Polynomial{2.0, 1.0}, common * Polynomial{-3.0, 1.0});
  CHECK(f.numerator().degree() == 1);
  CHECK(f.denominator().degree() == 1);
  CHECK(near(f.denominator().leading(), 1.0, 1e-15));
}

TEST_CASE("cancel_at removes only the named factor") {
  const Polynomial num = Polynomial::from_roots(std::vector<cplx>{0.5, 0.5, 0.1});
  const Polynomial den = Polynomial::from_roots(std::vector<cplx>{0.5, 2.0});
  const std::vector<cplx> pts{0.5};
  const RationalFunction f = RationalFunction::cancel_at(num, den, pts);
  CHECK(f.numerator().degree() == 2);
  CHECK(f.denominator().degree() == 1);
}
