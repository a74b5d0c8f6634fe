#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mslab/calculus.hpp"
#include "mslab/commutant.hpp"
#include "mslab/harness.hpp"
#include "mslab/inner.hpp"
#include "mslab/jordan.hpp"
#include "mslab/modelspace.hpp"
#include "mslab/serialize.hpp"

namespace py = pybind11;
using namespace mslab;

namespace {

using ZeroList = std::vector<std::pair<cplx, int>>;

Tolerances tolerances(const std::map<std::string, double>& overrides) {
  Tolerances tol;
  for (const auto& [name, value] : overrides) tol.set(name, value);
  return tol;
}

RootSet root_set(const ZeroList& hint) {
  RootSet out;
  for (const auto& [loc, mult] : hint) out.roots.push_back({loc, mult});
  return out;
}

ZeroList zero_list(const InnerFunction& u) {
  ZeroList out;
  for (const auto& z : u.zeros()) out.emplace_back(z.location, z.multiplicity);
  return out;
}

std::vector<Matrix> matrices(const OperatorSpaceBasis& b) {
  std::vector<Matrix> out;
  for (const auto& op : b.basis) out.push_back(op.matrix());
  return out;
}

RationalFunction rational(const std::vector<cplx>& num, const std::vector<cplx>& den) {
  return RationalFunction(Polynomial(num), Polynomial(den.empty() ? std::vector<cplx>{1.0} : den));
}

MatrixInnerFunction theta(const std::vector<std::pair<cplx, Vector>>& factors, const Matrix& constant,
                          const Tolerances& tol) {
  std::vector<PotapovFactor> f;
  for (const auto& [zero, dir] : factors) f.emplace_back(zero, dir);
  return MatrixInnerFunction(std::move(f), constant, tol);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Model-space operator toolkit: compressed shifts, functional calculus, commutants, Jordan models.";

  static py::exception<Error> error(m, "MslabError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, (std::string(to_string(e.kind())) + ": " + e.what()).c_str());
    }
  });

  m.def("tolerance_names", &Tolerances::names);
  m.def("suite_names", &suite_names);

  py::class_<InnerFunction>(m, "InnerFunction")
      .def(py::init([](const ZeroList& zeros, cplx constant) {
             std::vector<Zero> z;
             for (const auto& [loc, mult] : zeros) z.push_back({loc, mult});
             return InnerFunction(std::move(z), constant);
           }),
           py::arg("zeros") = ZeroList{}, py::arg("constant") = cplx(1.0))
      .def_static("blaschke", &InnerFunction::blaschke, py::arg("a"), py::arg("multiplicity") = 1)
      .def_static("power", &InnerFunction::power, py::arg("k"))
      .def_property_readonly("degree", &InnerFunction::degree)
      .def_property_readonly("constant", &InnerFunction::constant)
      .def_property_readonly("zeros", &zero_list)
      .def("__call__", [](const InnerFunction& u, cplx z) { return inner_eval(u, z); })
      .def("__mul__", [](const InnerFunction& u, const InnerFunction& v) { return inner_mul(u, v); })
      .def("__repr__", [](const InnerFunction& u) { return "InnerFunction(" + canonical_dump(to_json(u)) + ")"; });

  m.def("inner_gcd", [](const InnerFunction& u, const InnerFunction& v) { return inner_gcd(u, v); });
  m.def("relatively_prime", [](const InnerFunction& u, const InnerFunction& v) { return relatively_prime(u, v); });
  m.def("divides", [](const InnerFunction& d, const InnerFunction& u) { return divides(d, u); });

  m.def(
      "smirnov_canonical",
      [](const std::vector<cplx>& num, const std::vector<cplx>& den) {
        const SmirnovTriple t = smirnov_canonical(rational(num, den));
        return py::dict(py::arg("b") = canonical_dump(to_json(t.b)), py::arg("v") = t.v,
                        py::arg("a") = canonical_dump(to_json(t.a)), py::arg("a0") = t.a(0.0));
      },
      py::arg("numerator"), py::arg("denominator") = std::vector<cplx>{},
      "Canonical triple of numerator/denominator (coefficients lowest degree first); b and a as JSON.");

  m.def("compressed_shift", [](const InnerFunction& u) { return Matrix(compressed_shift(ModelSpace(u)).matrix()); });
  m.def("compressed_shift_by_projection",
        [](const InnerFunction& u) { return Matrix(compressed_shift_by_projection(ModelSpace(u)).matrix()); });
  m.def("kernel_vector", [](const InnerFunction& u, cplx w) { return Vector(kernel_vector(ModelSpace(u), w)); });
  m.def("tm_basis_eval", [](const InnerFunction& u, int j, cplx z) { return tm_basis_eval(ModelSpace(u), j, z); });
  m.def("embed_R", [](const InnerFunction& a, const InnerFunction& q) { return Matrix(embed_R(a, q).matrix()); });
  m.def("quotient_Q", [](const InnerFunction& a, const InnerFunction& q) { return Matrix(quotient_Q(a, q).matrix()); });
  m.def("jordan_operator", [](const std::vector<InnerFunction>& fs) { return Matrix(jordan_operator(fs).matrix()); });

  m.def("inner_of", [](const InnerFunction& u, const Matrix& t) {
    return Matrix(inner_of_operator(u, Operator::on(t)).matrix());
  });
  m.def(
      "h_of",
      [](const Matrix& t, const std::vector<cplx>& num, const std::vector<cplx>& den) {
        return Matrix(h_of(Operator::on(t), rational(num, den)).matrix());
      },
      py::arg("t"), py::arg("numerator"), py::arg("denominator") = std::vector<cplx>{});
  m.def(
      "k_infinity_member",
      [](const std::vector<cplx>& num, const std::vector<cplx>& den, const Matrix& t) {
        return k_infinity_member(rational(num, den), Operator::on(t));
      },
      py::arg("numerator"), py::arg("denominator"), py::arg("t"));
  m.def(
      "minimal_function",
      [](const Matrix& t, const ZeroList& hint) { return minimal_function(Operator::on(t), root_set(hint)); },
      py::arg("t"), py::arg("spectrum_hint"));
  m.def("defect_classify", [](const Matrix& t) {
    const DefectClass d = defect_classify(Operator::on(t));
    return py::dict(py::arg("n") = d.n, py::arg("is_c0n") = d.is_c0n, py::arg("defect") = d.defect,
                    py::arg("defect_star") = d.defect_star, py::arg("spectral_radius") = d.spectral_radius);
  });

  m.def("commutant_basis", [](const Matrix& t) { return matrices(commutant_basis(Operator::on(t))); });
  m.def("bicommutant_basis", [](const Matrix& t) { return matrices(bicommutant_basis(Operator::on(t))); });
  m.def(
      "match_calculus",
      [](const Matrix& a, const Matrix& t, const InnerFunction& mt) {
        const CalculusMatch r = match_calculus(Operator::on(a), Operator::on(t), mt);
        return py::make_tuple(r.p.coefficients(), r.residual);
      },
      py::arg("a"), py::arg("t"), py::arg("minimal_function"));

  m.def(
      "jordan_model",
      [](const Matrix& t, const ZeroList& hint) { return jordan_model(Operator::on(t), root_set(hint)).functions; },
      py::arg("t"), py::arg("spectrum_hint"));
  m.def(
      "multiplicity",
      [](const Matrix& t, const ZeroList& hint) { return multiplicity(Operator::on(t), root_set(hint)).value; },
      py::arg("t"), py::arg("spectrum_hint"));
  m.def(
      "minimal_function_from_theta",
      [](const std::vector<std::pair<cplx, Vector>>& factors, const Matrix& constant) {
        return minimal_function_from_theta(theta(factors, constant, {}));
      },
      py::arg("factors"), py::arg("constant"), "Theta = constant * prod(I - P + b_a P) over (zero, direction) factors.");
  m.def(
      "model_operator",
      [](const std::vector<std::pair<cplx, Vector>>& factors, const Matrix& constant) {
        return Matrix(model_operator(theta(factors, constant, {})).matrix());
      },
      py::arg("factors"), py::arg("constant"));

  m.def(
      "run_suite",
      [](const std::string& suite, std::uint64_t seed, int count, int degree_cap, int n_cap,
         const std::map<std::string, double>& tol, int jobs) {
        Scenario s;
        s.suite = suite_from_string(suite);
        s.seed = seed;
        s.instance_count = count;
        s.degree_cap = degree_cap;
        s.n_cap = n_cap;
        s.tol = tolerances(tol);
        s.jobs = jobs;
        Report r;
        {
          py::gil_scoped_release release;
          r = run_suite(s);
        }
        return canonical_dump(r.to_json());
      },
      py::arg("suite"), py::arg("seed") = 1, py::arg("count") = 20, py::arg("degree_cap") = 8, py::arg("n_cap") = 3,
      py::arg("tol") = std::map<std::string, double>{}, py::arg("jobs") = 1,
      "Runs a verification suite and returns the canonical JSON report.");
  m.def(
      "replay",
      [](const std::string& report_json, int index) {
        const ReplayResult r = replay(parse_json(report_json), index);
        return py::make_tuple(canonical_dump(r.record), r.identical);
      },
      py::arg("report"), py::arg("index"));
}
