#include "qpurify/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace qpurify {

namespace {

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

double number(const Json& j, const char* key) {
  if (!j.contains(key)) parse_fail(std::string("missing field '") + key + "'");
  const Json& v = j.at(key);
  if (!v.is_number()) parse_fail(std::string("field '") + key + "' is not a number");
  return v.get<double>();
}

}  // namespace

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    parse_fail("complex number must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

Json matrix_to_json(const MatX& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

MatX matrix_from_json(const Json& j, Eigen::Index rows, Eigen::Index cols) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows)
    parse_fail("matrix must have " + std::to_string(rows) + " rows");
  MatX m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      parse_fail("matrix row must have " + std::to_string(cols) + " entries");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = complex_from_json(row[static_cast<std::size_t>(c)]);
  }
  return m;
}

Json vector_to_json(const VecX& v) {
  Json out = Json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(complex_to_json(v(k)));
  return out;
}

Json dense_state_to_json(const DensityMatrix2Q& state) {
  return Json{{"kind", "dense"}, {"matrix", matrix_to_json(state.matrix())}};
}

Json w_param_to_json(const WCanonicalForm& form) {
  return Json{{"kind", "w_param"},
              {"p", form.p()},
              {"alpha", form.alpha()},
              {"beta", form.beta()},
              {"gamma", form.gamma()},
              {"u_a", matrix_to_json(form.u_a())},
              {"u_b", matrix_to_json(form.u_b())}};
}

ParsedState parse_state(const Json& j, double tol) {
  if (!j.is_object()) parse_fail("state must be a JSON object");
  if (!j.contains("kind") || !j.at("kind").is_string()) parse_fail("missing string field 'kind'");
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "dense") {
    if (!j.contains("matrix")) parse_fail("missing field 'matrix'");
    const Mat4 m = matrix_from_json(j.at("matrix"), 4, 4);
    return ParsedState{validate_density(m, tol), std::nullopt};
  }
  if (kind == "w_param") {
    const Mat2 ua = j.contains("u_a") ? Mat2(matrix_from_json(j.at("u_a"), 2, 2)) : Mat2::Identity();
    const Mat2 ub = j.contains("u_b") ? Mat2(matrix_from_json(j.at("u_b"), 2, 2)) : Mat2::Identity();
    WCanonicalForm form(number(j, "p"), number(j, "alpha"), number(j, "beta"), number(j, "gamma"), ua, ub, tol);
    return ParsedState{reconstruct(form), form};
  }
  parse_fail("unknown state kind '" + kind + "'");
}

ParsedState parse_state_text(const std::string& text, double tol) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    parse_fail(e.what());
  }
  return parse_state(j, tol);
}

Json tolerances_to_json(const Tolerances& t) {
  return Json{{"validation", t.validation}, {"reconstruction", t.reconstruction}, {"rank", t.rank},
              {"degeneracy", t.degeneracy}, {"continuum", t.continuum},
              {"certification", t.certification}};
}

Json product_ray_to_json(const ProductRay& ray) {
  return Json{{"a", vector_to_json(ray.factor_a.amplitudes())},
              {"b", vector_to_json(ray.factor_b.amplitudes())}};
}

Json range_report_to_json(const RangeReport& rep) {
  Json rays = Json::array();
  for (const auto& r : rep.range_class.rays) rays.push_back(product_ray_to_json(r));
  Json margins{{"rank_threshold", rep.rank_threshold},
               {"kept_eigenvalue_ratio", rep.kept_margin},
               {"dropped_eigenvalue_ratio", rep.dropped_margin},
               {"max_ray_residual", rep.max_ray_residual}};
  if (rep.quadratic) margins["relative_discriminant"] = rep.quadratic->relative_discriminant();
  Json ev = Json::array();
  for (int k = 0; k < 4; ++k) ev.push_back(rep.eigenvalues(k));
  Json out{{"rank", rep.rank},
           {"class", std::string(range_kind_name(rep.range_class.kind))},
           {"product_rays", rays},
           {"margins", margins},
           {"eigenvalues", ev},
           {"min_partial_transpose_eigenvalue", rep.min_partial_transpose_eigenvalue},
           {"tolerances", tolerances_to_json(rep.tolerances)}};
  if (rep.quadratic) {
    out["determinant_quadratic"] = Json{{"c20", complex_to_json(rep.quadratic->c20)},
                                        {"c11", complex_to_json(rep.quadratic->c11)},
                                        {"c02", complex_to_json(rep.quadratic->c02)}};
  }
  return out;
}

Json purification_report_to_json(const PurificationReport& rep) {
  Json out{{"verdict", rep.verdict == PairVerdict::Purifiable ? "purifiable" : "not_purifiable"},
           {"reason", rep.reason},
           {"probability", rep.probability},
           {"schmidt_margin", rep.schmidt_margin},
           {"range_a", range_report_to_json(rep.range_a)},
           {"range_b", range_report_to_json(rep.range_b)},
           {"tolerances", tolerances_to_json(rep.tolerances)}};
  if (rep.operators) {
    const auto& ops = *rep.operators;
    out["operators"] = Json{{"m", matrix_to_json(ops.m_aa.matrix())},
                            {"n", matrix_to_json(ops.n_bb.matrix())},
                            {"system_order", "AA'|BB'"}};
    out["expected_probability"] = ops.expected_probability;
    out["tie"] = ops.tie;
    out["canonical_forms"] = Json::array({w_param_to_json(ops.canon_a), w_param_to_json(ops.canon_b)});
    out["gamma_snapped"] = Json::array({ops.canon_a.gamma_snapped(), ops.canon_b.gamma_snapped()});
  } else {
    out["operators"] = nullptr;
  }
  if (rep.output_vector) {
    out["output_vector"] = vector_to_json(*rep.output_vector);
    out["output_order"] = order_label(kOrderAApBBp);
    Json sc = Json::array();
    for (Eigen::Index k = 0; k < rep.output_schmidt.size(); ++k) sc.push_back(rep.output_schmidt(k));
    out["output_schmidt"] = sc;
    out["rank_ratio"] = rep.rank_ratio;
    out["structure_overlap"] = rep.structure_overlap;
    if (rep.output_matrix) out["output_matrix"] = matrix_to_json(*rep.output_matrix);
  } else {
    out["output_vector"] = nullptr;
  }
  if (rep.procrustean_probability) out["procrustean_probability"] = *rep.procrustean_probability;
  return out;
}

Json search_config_to_json(const SearchConfig& cfg) {
  return Json{{"seed", cfg.seed},
              {"restarts", cfg.restarts},
              {"iterations_per_restart", cfg.iterations_per_restart},
              {"purity_eps", cfg.purity_eps},
              {"entanglement_eps", cfg.entanglement_eps}};
}

SearchConfig search_config_from_json(const Json& j) {
  if (!j.is_object()) parse_fail("search config must be an object");
  SearchConfig cfg;
  try {
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("restarts")) cfg.restarts = j.at("restarts").get<int>();
    if (j.contains("iterations_per_restart")) cfg.iterations_per_restart = j.at("iterations_per_restart").get<int>();
    if (j.contains("purity_eps")) cfg.purity_eps = j.at("purity_eps").get<double>();
    if (j.contains("entanglement_eps")) cfg.entanglement_eps = j.at("entanglement_eps").get<double>();
  } catch (const Json::exception& e) {
    parse_fail(e.what());
  }
  cfg.validate();
  return cfg;
}

Json search_result_to_json(const SearchResult& res) {
  Json restarts = Json::array();
  for (const auto& r : res.restarts)
    restarts.push_back(Json{{"probability", r.probability},
                            {"purity", r.purity},
                            {"schmidt_gap", r.schmidt_gap},
                            {"feasible", r.feasible}});
  return Json{{"best_probability", res.best_probability},
              {"feasible", res.feasible},
              {"output_purity", res.output_purity},
              {"output_schmidt_gap", res.output_schmidt_gap},
              {"best_restart", res.best_restart},
              {"feasible_restarts", res.feasible_restarts},
              {"best_operators", Json{{"m", matrix_to_json(res.best_m)},
                                      {"n", matrix_to_json(res.best_n)},
                                      {"system_order", "AA'|BB'"}}},
              {"restarts", restarts}};
}

namespace {

void write_json(std::ostringstream& os, const Json& j, int indent, int depth) {
  const auto pad = [&](int d) {
    if (indent >= 0) os << '\n' << std::string(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ',';
        first = false;
        pad(depth + 1);
        os << Json(it.key()).dump() << (indent >= 0 ? ": " : ":");
        write_json(os, it.value(), indent, depth + 1);
      }
      pad(depth);
      os << '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      // Complex numbers and other flat numeric arrays stay on one line.
      const bool flat = std::all_of(j.begin(), j.end(), [](const Json& x) { return x.is_primitive(); });
      os << '[';
      bool first = true;
      for (const auto& x : j) {
        if (!first) os << (flat && indent >= 0 ? ", " : ",");
        first = false;
        if (!flat) pad(depth + 1);
        write_json(os, x, indent, depth + 1);
      }
      if (!flat) pad(depth);
      os << ']';
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        os << "null";
        return;
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      std::string s(buf);
      if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
      os << s;
      return;
    }
    default:
      os << j.dump();
  }
}

}  // namespace

std::string dump_json(const Json& j, int indent) {
  std::ostringstream os;
  write_json(os, j, indent, 0);
  return os.str();
}

}  // namespace qpurify
