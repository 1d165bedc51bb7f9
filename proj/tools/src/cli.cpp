#include "qpurify/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

namespace qpurify::cli {

namespace {

constexpr double kSearchExcessLimit = 1e-6;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v == 0.0 ? 0.0 : v);
  return buf;
}

std::string fmt_complex(Complex z) {
  return "(" + fmt(z.real()) + (z.imag() < 0 ? " - " : " + ") + fmt(std::abs(z.imag())) + "i)";
}

void print_matrix(std::ostream& out, const std::string& name, const MatX& m) {
  out << name << ":\n";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    out << "  ";
    for (Eigen::Index c = 0; c < m.cols(); ++c) out << (c ? " " : "") << fmt_complex(m(r, c));
    out << "\n";
  }
}

void print_range(std::ostream& out, const std::string& label, const RangeReport& rep) {
  out << label << "class: " << range_kind_name(rep.range_class.kind) << "\n";
  out << label << "rank: " << rep.rank << "\n";
  out << label << "eigenvalues: " << fmt(rep.eigenvalues(0)) << " " << fmt(rep.eigenvalues(1)) << " "
      << fmt(rep.eigenvalues(2)) << " " << fmt(rep.eigenvalues(3)) << "\n";
  out << label << "rank margins: kept/threshold " << fmt(rep.kept_margin) << ", dropped/threshold "
      << fmt(rep.dropped_margin) << "\n";
  if (rep.quadratic)
    out << label << "relative discriminant: " << fmt(rep.quadratic->relative_discriminant()) << "\n";
  for (std::size_t k = 0; k < rep.range_class.rays.size(); ++k) {
    const auto& ray = rep.range_class.rays[k];
    // Shown with the larger amplitude of the first factor real and positive.
    Vec2 a = ray.factor_a.amplitudes(), b = ray.factor_b.amplitudes();
    const Complex lead = std::abs(a(0)) >= std::abs(a(1)) ? a(0) : a(1);
    const Complex phase = lead / std::abs(lead);
    a /= phase;
    b *= phase;
    out << label << "product ray " << k + 1 << ": [" << fmt_complex(a(0)) << ", " << fmt_complex(a(1))
        << "] x [" << fmt_complex(b(0)) << ", " << fmt_complex(b(1)) << "]\n";
  }
  out << label << "min partial-transpose eigenvalue: " << fmt(rep.min_partial_transpose_eigenvalue) << "\n";
}

void add_tolerance_flags(CLI::App& cmd, Tolerances& tols) {
  cmd.add_option("--tol", tols.validation, "Validation tolerance for input states")->capture_default_str();
  cmd.add_option("--rank-tol", tols.rank, "Relative eigenvalue cut for the numerical rank")->capture_default_str();
  cmd.add_option("--degeneracy-tol", tols.degeneracy, "Relative discriminant treated as a double root")
      ->capture_default_str();
  cmd.add_option("--continuum-tol", tols.continuum, "Coefficient size treated as an identically zero quadratic")
      ->capture_default_str();
  cmd.add_option("--certification-tol", tols.certification, "Output trace and Schmidt certification tolerance")
      ->capture_default_str();
}

int status_of(const Error& e) { return is_internal_failure(e.code()) ? kInternalFailure : kInvalidInput; }

}  // namespace

StateSpec load_state(const std::string& path, double tol) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return StateSpec{parse_state_text(buf.str(), tol), path};
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.detail());
  }
}

void check_tolerances(const Tolerances& tols) {
  for (double t : {tols.validation, tols.reconstruction, tols.rank, tols.degeneracy, tols.continuum,
                   tols.certification})
    if (!(t > 0.0) || !std::isfinite(t)) throw Error(ErrorCode::InvalidParameters, "tolerances must be positive");
}

int cmd_analyze(const std::string& path, const Tolerances& tols, bool json, std::ostream& out) {
  check_tolerances(tols);
  const StateSpec spec = load_state(path, tols.validation);
  const RangeReport rep = analyze_range(spec.parsed.state, tols);
  const bool one = purifiable_n_copies(spec.parsed.state, 1, tols);
  const bool two = purifiable_n_copies(spec.parsed.state, 2, tols);
  const Verdict single = purifiable_single_copy(spec.parsed.state, tols);

  if (json) {
    Json j = range_report_to_json(rep);
    j["source"] = spec.source;
    j["purifiable_n_copies"] = Json{{"1", one}, {"2", two}};
    j["single_copy_reason"] = single.reason;
    out << dump_json(j) << "\n";
  } else {
    out << "source: " << spec.source << "\n";
    print_range(out, "", rep);
    out << "purifiable (n=1): " << (one ? "yes" : "no") << "  [" << single.reason << "]\n";
    out << "purifiable (n>=2): " << (two ? "yes" : "no") << "\n";
  }
  return two ? kPurifiable : kNotPurifiable;
}

int cmd_pair(const std::string& path_a, const std::string& path_b, const Tolerances& tols, bool json,
             std::ostream& out) {
  check_tolerances(tols);
  const StateSpec a = load_state(path_a, tols.validation);
  const StateSpec b = load_state(path_b, tols.validation);
  const PurificationReport rep = purify_pair(a.parsed.state, b.parsed.state, tols);
  const bool ok = rep.verdict == PairVerdict::Purifiable;

  if (json) {
    Json j = purification_report_to_json(rep);
    j["sources"] = Json::array({a.source, b.source});
    out << dump_json(j) << "\n";
  } else {
    out << "sources: " << a.source << ", " << b.source << "\n";
    print_range(out, "rho ", rep.range_a);
    print_range(out, "sigma ", rep.range_b);
    out << "verdict: " << (ok ? "purifiable" : "not purifiable") << "\n";
    out << "reason: " << rep.reason << "\n";
    if (rep.procrustean_probability)
      out << "single-copy procrustean probability: " << fmt(*rep.procrustean_probability) << "\n";
    if (ok) {
      const auto& ops = *rep.operators;
      out << "probability: " << fmt(rep.probability) << "\n";
      out << "expected probability: " << fmt(ops.expected_probability) << "\n";
      out << "canonical rho: p=" << fmt(ops.canon_a.p()) << " alpha=" << fmt(ops.canon_a.alpha())
          << " beta=" << fmt(ops.canon_a.beta()) << " gamma=" << fmt(ops.canon_a.gamma()) << "\n";
      out << "canonical sigma: p=" << fmt(ops.canon_b.p()) << " alpha=" << fmt(ops.canon_b.alpha())
          << " beta=" << fmt(ops.canon_b.beta()) << " gamma=" << fmt(ops.canon_b.gamma()) << "\n";
      print_matrix(out, "m on (A, A')", ops.m_aa.matrix());
      print_matrix(out, "n on (B, B')", ops.n_bb.matrix());
      out << "output rank ratio: " << fmt(rep.rank_ratio) << "\n";
      out << "output Schmidt coefficients (AA'|BB'):";
      for (Eigen::Index k = 0; k < rep.output_schmidt.size(); ++k) out << " " << fmt(rep.output_schmidt(k));
      out << "\n";
      out << "Schmidt margin: " << fmt(rep.schmidt_margin) << "\n";
    }
  }
  return ok ? kPurifiable : kNotPurifiable;
}

int cmd_search(const std::string& path_a, const std::string& path_b, const SearchConfig& cfg,
               const Tolerances& tols, bool json, std::ostream& out) {
  check_tolerances(tols);
  const StateSpec a = load_state(path_a, tols.validation);
  const StateSpec b = load_state(path_b, tols.validation);
  const SearchResult res = search_best_protocol(a.parsed.state, b.parsed.state, cfg);

  std::optional<double> optimum;
  if (is_w_class(classify_range(a.parsed.state, tols).kind) &&
      is_w_class(classify_range(b.parsed.state, tols).kind)) {
    optimum = optimal_probability(w_canonicalize(a.parsed.state, tols), w_canonicalize(b.parsed.state, tols));
  }
  const double gap = optimum ? res.best_probability - *optimum : 0.0;
  const bool exceeded = optimum && res.feasible && gap > kSearchExcessLimit;
  const char* status = exceeded ? "exceeds analytic optimum" : res.feasible ? "feasible" : "infeasible within budget";

  if (json) {
    Json j{{"sources", Json::array({a.source, b.source})},
           {"config", search_config_to_json(cfg)},
           {"result", search_result_to_json(res)},
           {"status", status},
           {"tolerances", tolerances_to_json(tols)}};
    j["analytic_optimum"] = optimum ? Json(*optimum) : Json(nullptr);
    j["gap"] = optimum ? Json(gap) : Json(nullptr);
    out << dump_json(j) << "\n";
  } else {
    out << "sources: " << a.source << ", " << b.source << "\n";
    out << "seed: " << cfg.seed << "  restarts: " << cfg.restarts << "  iterations: " << cfg.iterations_per_restart
        << "\n";
    out << "status: " << status << " (" << res.feasible_restarts << "/" << cfg.restarts << " restarts feasible)\n";
    out << "best probability: " << fmt(res.best_probability) << "\n";
    out << "output purity deficit: " << fmt(1.0 - res.output_purity) << "\n";
    out << "output Schmidt gap: " << fmt(res.output_schmidt_gap) << "\n";
    if (optimum) {
      out << "analytic optimum: " << fmt(*optimum) << "\n";
      out << "gap (found - optimum): " << fmt(gap) << "\n";
    } else {
      out << "analytic optimum: n/a (pair is not W-class)\n";
    }
    print_matrix(out, "best m on (A, A')", res.best_m);
    print_matrix(out, "best n on (B, B')", res.best_n);
  }
  if (exceeded) return kInternalFailure;
  return res.feasible ? kPurifiable : kNotPurifiable;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Purification of pairs of two-qubit mixed states by local filtering", "qpurify"};
  app.require_subcommand(1);

  Tolerances tols;
  bool json = false;
  std::string file_a, file_b;

  auto* analyze = app.add_subcommand("analyze", "Classify the range of a state and report n-copy purifiability");
  analyze->add_option("state_file", file_a, "State JSON file")->required();
  add_tolerance_flags(*analyze, tols);
  analyze->add_flag("--json", json, "Emit a JSON report");

  auto* pair = app.add_subcommand("pair", "Run the optimal two-copy protocol on a pair of states");
  pair->add_option("state_file_a", file_a, "First state (systems A, B)")->required();
  pair->add_option("state_file_b", file_b, "Second state (systems A', B')")->required();
  add_tolerance_flags(*pair, tols);
  pair->add_flag("--json", json, "Emit a JSON report");

  SearchConfig cfg;
  auto* search = app.add_subcommand("search", "Numerically search for the best local filter pair");
  search->add_option("state_file_a", file_a, "First state (systems A, B)")->required();
  search->add_option("state_file_b", file_b, "Second state (systems A', B')")->required();
  search->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  search->add_option("--restarts", cfg.restarts, "Number of random restarts")->capture_default_str();
  search->add_option("--iters", cfg.iterations_per_restart, "Iterations per restart")->capture_default_str();
  search->add_option("--purity-eps", cfg.purity_eps, "Allowed purity deficit")->capture_default_str();
  search->add_option("--entanglement-eps", cfg.entanglement_eps, "Allowed Schmidt deviation")
      ->capture_default_str();
  search->add_option("--threads", cfg.threads, "Worker threads (0: all cores)")->capture_default_str();
  add_tolerance_flags(*search, tols);
  search->add_flag("--json", json, "Emit a JSON report");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kInvalidInput;
  }

  try {
    if (analyze->parsed()) return cmd_analyze(file_a, tols, json, out);
    if (pair->parsed()) return cmd_pair(file_a, file_b, tols, json, out);
    return cmd_search(file_a, file_b, cfg, tols, json, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return status_of(e);
  } catch (const std::exception& e) {
    err << "error: internal: " << e.what() << "\n";
    return kInternalFailure;
  }
}

}  // namespace qpurify::cli
