#include "doctest.h"
#include "mslab/serialize.hpp"
#include "test_support.hpp"

using namespace mslab;

TEST_CASE("canonical_dump sorts keys and prints 17 significant digits") {
  const Json j = {{"b", 0.1}, {"a", Json::array({1, -2.5, true, nullptr})}, {"c", "x\"y"}};
  CHECK(canonical_dump(j) == R"({"a":[1,-2.5,true,null],"b":0.10000000000000001,"c":"x\"y"})");
  CHECK(canonical_dump(Json::object()) == "{}");
  CHECK(canonical_dump(Json(std::uint64_t{18446744073709551615ULL})) == "18446744073709551615");
  CHECK(canonical_dump(Json(std::nan(""))) == "\"nan\"");
}

TEST_CASE("doubles round-trip exactly through canonical text") {
  Rng rng(5);
  for (int k = 0; k < 200; ++k) {
    const double x = rng.normal() * std::pow(10.0, rng.uniform_int(-300, 300));
    CHECK(parse_json(canonical_dump(Json(x))).get<double>() == x);
  }
}

TEST_CASE("polynomial and rational formats") {
  const Polynomial p{cplx(1, 2), cplx(0, -1), 3.0};
  CHECK(canonical_dump(to_json(p)) == "[[1,2],[0,-1],[3,0]]");
  const Polynomial back = polynomial_from_json(to_json(p));
  CHECK(back.coefficients() == p.coefficients());
  CHECK(canonical_dump(to_json(Polynomial{})) == "[]");

  const RationalFunction f(Polynomial{1.0}, Polynomial{-0.5, 1.0});
  const RationalFunction g = rational_from_json(parse_json(canonical_dump(to_json(f))));
  CHECK(g.numerator().coefficients() == f.numerator().coefficients());
  CHECK(g.denominator().coefficients() == f.denominator().coefficients());
  CHECK_THROWS_AS(rational_from_json(Json::array()), Error);
}

TEST_CASE("inner function format") {
  const InnerFunction u({{cplx(0.5, 0), 2}, {cplx(0, -0.25), 1}}, cplx(0, 1));
  CHECK(canonical_dump(to_json(u)) == R"({"constant":[0,1],"zeros":[[0.5,0,2],[0,-0.25,1]]})");
  const InnerFunction back = inner_from_json(to_json(u));
  CHECK(back.constant() == u.constant());
  REQUIRE(back.zeros().size() == 2);
  CHECK(back.zeros()[0].multiplicity == 2);
  CHECK(back.zeros()[1].location == cplx(0, -0.25));
  CHECK_THROWS_AS(inner_from_json(Json{{"zeros", Json::array({Json::array({0.1, 0.0})})}, {"constant", {1, 0}}}),
                  Error);
}

TEST_CASE("operator and basis formats") {
  Matrix m(2, 3);
  m << 1, 2, 3, cplx(0, 4), 5, 6;
  const Operator op(m, {"src", 3}, {"dst", 2});
  const Json j = to_json(op);
  CHECK(j["entries"][3] == Json::array({0, 4}));  // row-major
  CHECK(j["source"]["label"] == "src");
  const Operator back = operator_from_json(parse_json(canonical_dump(j)));
  CHECK(back.matrix() == m);
  CHECK(back.source() == op.source());
  CHECK(back.target() == op.target());

  const OperatorSpaceBasis basis = commutant_basis(compressed_shift(ModelSpace(InnerFunction::power(2))));
  const Json bj = to_json(basis);
  CHECK(bj["dimension"] == 2);
  const OperatorSpaceBasis bb = basis_from_json(parse_json(canonical_dump(bj)));
  REQUIRE(bb.dimension() == 2);
  CHECK(bb.basis[1].matrix() == basis.basis[1].matrix());
  Json broken = bj;
  broken["dimension"] = 3;
  CHECK_THROWS_AS(basis_from_json(broken), Error);
}

TEST_CASE("matrix inner function format") {
  Vector v(2);
  v << cplx(0.6, 0), cplx(0, 0.8);
  const MatrixInnerFunction theta({PotapovFactor(0.3, v), PotapovFactor(cplx(0, 0.2), Vector::Unit(2, 0))},
                                  Matrix::Identity(2, 2));
  const Json j = to_json(theta);
  CHECK(j["size"] == 2);
  CHECK(j["factors"][0]["zero"] == Json::array({0.3, 0}));
  CHECK(j["factors"][0]["projection_vector"][1] == Json::array({0, 0.8}));
  const MatrixInnerFunction back = matrix_inner_from_json(parse_json(canonical_dump(j)));
  CHECK((back(cplx(0.1, 0.2)) - theta(cplx(0.1, 0.2))).norm() <= 1e-15);
  CHECK_THROWS_AS(parse_json("{not json"), Error);
}
