#pragma once

#include <string>

#include <json.hpp>

#include "mslab/jordan.hpp"

namespace mslab {

using Json = nlohmann::json;

/// Canonical text: sorted keys, no whitespace, floats as %.17g, so equal
/// values always produce equal bytes and doubles round-trip exactly.
std::string canonical_dump(const Json& j);
Json parse_json(const std::string& text);

Json to_json(cplx z);
Json to_json(const Polynomial& p);
Json to_json(const RationalFunction& f);
Json to_json(const InnerFunction& u);
Json to_json(const SpaceDescriptor& d);
Json to_json(const Operator& op);
Json to_json(const OperatorSpaceBasis& b);
Json to_json(const MatrixInnerFunction& theta);
Json matrix_to_json(const Matrix& m);  // row-major [re, im] pairs

cplx complex_from_json(const Json& j);
Polynomial polynomial_from_json(const Json& j);
RationalFunction rational_from_json(const Json& j);
InnerFunction inner_from_json(const Json& j, const Tolerances& tol = {});
SpaceDescriptor descriptor_from_json(const Json& j);
Operator operator_from_json(const Json& j);
OperatorSpaceBasis basis_from_json(const Json& j);
MatrixInnerFunction matrix_inner_from_json(const Json& j, const Tolerances& tol = {});
Matrix matrix_from_json(const Json& j, Eigen::Index rows, Eigen::Index cols);

}  // namespace mslab
