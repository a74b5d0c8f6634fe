#include "mslab/serialize.hpp"

#include <cmath>
#include <cstdio>

namespace mslab {

namespace {

void emit_string(std::string& out, const std::string& s) {
  // nlohmann's escaping is already canonical for strings.
  out += Json(s).dump();
}

void emit_float(std::string& out, double x) {
  if (!std::isfinite(x)) {
    out += std::isnan(x) ? "\"nan\"" : (x > 0 ? "\"inf\"" : "\"-inf\"");
    return;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  out += buf;
}

void emit(std::string& out, const Json& j) {
  switch (j.type()) {
    case Json::value_t::object: {
      out += '{';
      bool first = true;
      for (const auto& [key, value] : j.items()) {  // std::map order: sorted
        if (!first) out += ',';
        first = false;
        emit_string(out, key);
        out += ':';
        emit(out, value);
      }
      out += '}';
      break;
    }
    case Json::value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ',';
        emit(out, j[i]);
      }
      out += ']';
      break;
    }
    case Json::value_t::number_float: emit_float(out, j.get<double>()); break;
    case Json::value_t::string: emit_string(out, j.get<std::string>()); break;
    default: out += j.dump(); break;
  }
}

double number(const Json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "nan") return std::nan("");
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
  }
  return j.get<double>();
}

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorKind::io, std::string("malformed serialization: ") + what);
}

}  // namespace

std::string canonical_dump(const Json& j) {
  std::string out;
  emit(out, j);
  return out;
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::io, std::string("invalid JSON: ") + e.what());
  }
}

Json to_json(cplx z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const Polynomial& p) {
  Json out = Json::array();
  for (cplx c : p.coefficients()) out.push_back(to_json(c));
  return out;
}

Json to_json(const RationalFunction& f) {
  return {{"numerator", to_json(f.numerator())}, {"denominator", to_json(f.denominator())}};
}

Json to_json(const InnerFunction& u) {
  Json zeros = Json::array();
  for (const auto& z : u.zeros())
    zeros.push_back(Json::array({z.location.real(), z.location.imag(), z.multiplicity}));
  return {{"constant", to_json(u.constant())}, {"zeros", zeros}};
}

Json to_json(const SpaceDescriptor& d) { return {{"label", d.label}, {"dimension", d.dimension}}; }

Json matrix_to_json(const Matrix& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(to_json(m(r, c)));
  return out;
}

Json to_json(const Operator& op) {
  return {{"rows", op.rows()},
          {"cols", op.cols()},
          {"entries", matrix_to_json(op.matrix())},
          {"source", to_json(op.source())},
          {"target", to_json(op.target())}};
}

Json to_json(const OperatorSpaceBasis& b) {
  Json list = Json::array();
  for (const auto& op : b.basis) list.push_back(to_json(op));
  return {{"dimension", b.dimension()}, {"basis", list}};
}

Json to_json(const MatrixInnerFunction& theta) {
  Json factors = Json::array();
  for (const auto& f : theta.factors()) {
    Json v = Json::array();
    for (Eigen::Index k = 0; k < f.size(); ++k) v.push_back(to_json(f.direction()(k)));
    factors.push_back({{"zero", to_json(f.zero())}, {"projection_vector", v}});
  }
  return {{"size", theta.size()}, {"constant", matrix_to_json(theta.constant())}, {"factors", factors}};
}

cplx complex_from_json(const Json& j) {
  require(j.is_array() && j.size() == 2, "complex number");
  return {number(j[0]), number(j[1])};
}

Polynomial polynomial_from_json(const Json& j) {
  require(j.is_array(), "polynomial");
  std::vector<cplx> c;
  for (const auto& e : j) c.push_back(complex_from_json(e));
  return Polynomial(std::move(c));
}

RationalFunction rational_from_json(const Json& j) {
  require(j.is_object() && j.contains("numerator") && j.contains("denominator"), "rational function");
  return RationalFunction::unreduced(polynomial_from_json(j["numerator"]), polynomial_from_json(j["denominator"]));
}

InnerFunction inner_from_json(const Json& j, const Tolerances& tol) {
  require(j.is_object() && j.contains("zeros") && j.contains("constant"), "inner function");
  std::vector<Zero> zeros;
  for (const auto& z : j["zeros"]) {
    require(z.is_array() && z.size() == 3, "zero");
    zeros.push_back({{number(z[0]), number(z[1])}, z[2].get<int>()});
  }
  return InnerFunction(std::move(zeros), complex_from_json(j["constant"]), tol);
}

SpaceDescriptor descriptor_from_json(const Json& j) {
  require(j.is_object(), "space descriptor");
  return {j.at("label").get<std::string>(), j.at("dimension").get<Eigen::Index>()};
}

Matrix matrix_from_json(const Json& j, Eigen::Index rows, Eigen::Index cols) {
  require(j.is_array() && static_cast<Eigen::Index>(j.size()) == rows * cols, "matrix entries");
  Matrix m(rows, cols);
  std::size_t k = 0;
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = complex_from_json(j[k++]);
  return m;
}

Operator operator_from_json(const Json& j) {
  require(j.is_object(), "operator");
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  return Operator(matrix_from_json(j.at("entries"), rows, cols), descriptor_from_json(j.at("source")),
                  descriptor_from_json(j.at("target")));
}

OperatorSpaceBasis basis_from_json(const Json& j) {
  require(j.is_object() && j.contains("basis"), "operator space basis");
  OperatorSpaceBasis out;
  for (const auto& op : j["basis"]) out.basis.push_back(operator_from_json(op));
  require(out.dimension() == j.at("dimension").get<int>(), "basis dimension");
  return out;
}

MatrixInnerFunction matrix_inner_from_json(const Json& j, const Tolerances& tol) {
  require(j.is_object(), "matrix inner function");
  const auto n = j.at("size").get<Eigen::Index>();
  std::vector<PotapovFactor> factors;
  for (const auto& f : j.at("factors")) {
    const Json& v = f.at("projection_vector");
    require(static_cast<Eigen::Index>(v.size()) == n, "projection vector size");
    Vector dir(n);
    for (Eigen::Index k = 0; k < n; ++k) dir(k) = complex_from_json(v[static_cast<std::size_t>(k)]);
    factors.emplace_back(complex_from_json(f.at("zero")), dir);
  }
  return MatrixInnerFunction(std::move(factors), matrix_from_json(j.at("constant"), n, n), tol);
}

}  // namespace mslab
