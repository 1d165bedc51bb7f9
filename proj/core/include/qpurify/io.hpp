#pragma once

// JSON schemas:
//   dense state   {"kind":"dense","matrix": 4x4 array of [re, im]}
//   w_param state {"kind":"w_param","p":..,"alpha":..,"beta":..,"gamma":..,
//                  "u_a": optional 2x2, "u_b": optional 2x2}
// Complex numbers are always two-element arrays.

#include <string>

#include <nlohmann/json.hpp>

#include "qpurify/canonical.hpp"
#include "qpurify/oracle.hpp"
#include "qpurify/protocol.hpp"
#include "qpurify/range.hpp"

namespace qpurify {

using Json = nlohmann::json;

Json complex_to_json(Complex z);
Complex complex_from_json(const Json& j);
Json matrix_to_json(const MatX& m);
MatX matrix_from_json(const Json& j, Eigen::Index rows, Eigen::Index cols);
Json vector_to_json(const VecX& v);

Json dense_state_to_json(const DensityMatrix2Q& state);
Json w_param_to_json(const WCanonicalForm& form);

struct ParsedState {
  DensityMatrix2Q state;
  std::optional<WCanonicalForm> form;  // present for w_param input
};

// Throws Error(ParseError) on schema violations and the validation errors of
// validate_density / WCanonicalForm on bad values.
ParsedState parse_state(const Json& j, double tol = 1e-9);
ParsedState parse_state_text(const std::string& text, double tol = 1e-9);

Json tolerances_to_json(const Tolerances& t);
Json product_ray_to_json(const ProductRay& ray);
Json range_report_to_json(const RangeReport& rep);
Json purification_report_to_json(const PurificationReport& rep);

Json search_config_to_json(const SearchConfig& cfg);
SearchConfig search_config_from_json(const Json& j);
Json search_result_to_json(const SearchResult& res);

// Serializes with every floating-point number printed to 17 significant digits.
std::string dump_json(const Json& j, int indent = 2);

}  // namespace qpurify
