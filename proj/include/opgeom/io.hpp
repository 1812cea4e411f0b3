#pragma once

#include <string>

#include "json.hpp"
#include "opgeom/operator_spec.hpp"

namespace opgeom {

using json = nlohmann::ordered_json;

json vec_to_json(const Vec& v);
Vec vec_from_json(const json& j);
json mat_to_json(const Mat& m);  // list of rows
Mat mat_from_json(const json& j);

// term list [{"exp":[...], "c": coeff}, ...]
json poly_to_json(const PolyScalarField& p);
PolyScalarField poly_from_json(const json& j, int n);
json matfield_to_json(const PolyMatrixField& f);
PolyMatrixField matfield_from_json(const json& j, int n, int rows, int cols);

// {"n":..,"m":..,"chart":{"lo":[..],"hi":[..]},"A":[..],"B":..}
json operator_to_json(const OperatorSpec& op);
OperatorSpec operator_from_json(const json& j);

// {"n":..,"m":..,"P":..,"P_inv":..}
json gauge_to_json(const GaugeTransform& g);
GaugeTransform gauge_from_json(const json& j);

// both throw std::runtime_error with a readable message
json read_json_file(const std::string& path);
void write_json_file(const json& j, const std::string& path);

OperatorSpec load_operator(const std::string& path);
void save_operator(const OperatorSpec& op, const std::string& path);
GaugeTransform load_gauge(const std::string& path);
void save_gauge(const GaugeTransform& g, const std::string& path);

}  // namespace opgeom
