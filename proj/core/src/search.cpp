#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

#include <ceres/gradient_problem.h>
#include <ceres/gradient_problem_solver.h>

#include "qpurify/oracle.hpp"
#include "qpurify/protocol.hpp"

namespace qpurify {

void SearchConfig::validate() const {
  if (restarts < 1 || iterations_per_restart < 1)
    throw Error(ErrorCode::InvalidParameters, "restarts and iterations must be >= 1");
  if (!(purity_eps > 0.0 && purity_eps < 1.0) || !(entanglement_eps > 0.0 && entanglement_eps < 1.0))
    throw Error(ErrorCode::InvalidParameters, "eps values must lie in (0, 1)");
  if (threads < 0) throw Error(ErrorCode::InvalidParameters, "threads must be >= 0");
}

namespace {

constexpr int kParams = 64;
constexpr double kInitialScale = 0.5;
// Penalty weights of the continuation stages: 1e2, 1e3, ..., 1e10.
constexpr double kFirstWeight = 1e2;
constexpr int kStages = 9;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double operator_norm(const Mat4& m) {
  Eigen::SelfAdjointEigenSolver<Mat4> es(m.adjoint() * m, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues()(3)));
}

struct FilterPair {
  Mat4 m, n;
};

FilterPair unpack(const double* x) {
  FilterPair f;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      f.m(r, c) = Complex(x[4 * r + c], x[16 + 4 * r + c]);
      f.n(r, c) = Complex(x[32 + 4 * r + c], x[48 + 4 * r + c]);
    }
  return f;
}

void pack(const Mat4& dm, const Mat4& dn, double* g) {
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      g[4 * r + c] = dm(r, c).real();
      g[16 + 4 * r + c] = dm(r, c).imag();
      g[32 + 4 * r + c] = dn(r, c).real();
      g[48 + 4 * r + c] = dn(r, c).imag();
    }
}

FilterPair normalized(FilterPair f) {
  const double nm = operator_norm(f.m), nn = operator_norm(f.n);
  if (nm > 0.0) f.m /= nm;
  if (nn > 0.0) f.n /= nn;
  return f;
}

// sum_i max(0, s_i^2 - 1)^2 over the singular values of a; adds the
// derivative (d/dRe + i d/dIm) scaled by weight to grad.
double norm_excess(const Mat4& a, double weight, Mat4* grad) {
  Eigen::SelfAdjointEigenSolver<Mat4> es(a.adjoint() * a);
  double q = 0.0;
  Eigen::Vector4cd slope;
  for (int i = 0; i < 4; ++i) {
    const double e = std::max(0.0, es.eigenvalues()(i) - 1.0);
    q += e * e;
    slope(i) = 2.0 * e;
  }
  if (grad && q > 0.0)
    *grad += 2.0 * weight * a * (es.eigenvectors() * slope.asDiagonal() * es.eigenvectors().adjoint());
  return q;
}

// rho (x) sigma on (A, A', B, B') as a sum of rank-one terms |t_k><t_k|, each
// t_k stored as a 4x4 matrix (row: AA' index, column: BB' index), so that
// (m (x) n) t_k becomes m T_k n^T.
class FilterModel {
 public:
  FilterModel(const DensityMatrix2Q& rho, const DensityMatrix2Q& sigma) {
    const auto eig = hermitian_eig(joint_state(rho, sigma), 1e-9);
    const double cut = 1e-14 * eig.values(0);
    for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
      if (eig.values(k) <= cut) break;
      const VecX v = std::sqrt(eig.values(k)) * eig.vectors.col(k);
      Mat4 t;
      for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) t(r, c) = v(4 * r + c);
      terms_.push_back(t);
    }
  }

  std::vector<Mat4> outputs(const FilterPair& f) const {
    std::vector<Mat4> outs(terms_.size());
    const Mat4 nt = f.n.transpose();
    for (std::size_t k = 0; k < terms_.size(); ++k) outs[k].noalias() = f.m * terms_[k] * nt;
    return outs;
  }

  static MatX gram(const std::vector<Mat4>& outs) {
    const Eigen::Index r = static_cast<Eigen::Index>(outs.size());
    MatX g(r, r);
    for (Eigen::Index j = 0; j < r; ++j)
      for (Eigen::Index l = j; l < r; ++l) {
        g(j, l) = outs[static_cast<std::size_t>(l)].cwiseProduct(outs[static_cast<std::size_t>(j)].conjugate()).sum();
        g(l, j) = std::conj(g(j, l));
      }
    return g;
  }

  // -log P + w * (purity deficit + |2R^2 - R|^2 + norm excess of m and n),
  // R the AA' marginal of the normalized output. For a pure output the middle
  // term vanishes exactly when the Schmidt coefficients are (1/sqrt2, 1/sqrt2, 0, 0).
  double objective(const double* x, double weight, double* grad) const {
    const FilterPair f = unpack(x);
    const auto outs = outputs(f);
    const MatX g = gram(outs);
    const double p = g.trace().real();
    if (!(p > 1e-300)) return std::numeric_limits<double>::infinity();
    const double s2 = g.squaredNorm();
    const double deficit = 1.0 - s2 / (p * p);

    Mat4 marginal = Mat4::Zero();
    for (const auto& o : outs) marginal.noalias() += o * o.adjoint();
    const Mat4 red = marginal / p;
    const Mat4 split = 2.0 * red * red - red;
    const double spread = split.squaredNorm();

    Mat4 dm = Mat4::Zero(), dn = Mat4::Zero();
    const double excess = norm_excess(f.m, weight, grad ? &dm : nullptr) +
                          norm_excess(f.n, weight, grad ? &dn : nullptr);
    const double value = -std::log(p) + weight * (deficit + spread + excess);
    if (!grad) return value;

    const Mat4 kmat = 2.0 * (split * red + red * split) - split;
    const double k_red = (kmat * red).trace().real();
    const Mat4 n_bar = f.n.conjugate(), m_bar = f.m.conjugate();
    for (std::size_t l = 0; l < outs.size(); ++l) {
      Mat4 gs = Mat4::Zero();
      for (std::size_t j = 0; j < outs.size(); ++j)
        gs += g(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l)) * outs[j];
      const Mat4& o = outs[l];
      Mat4 y = (-2.0 / p) * o;
      y += weight * ((-4.0 / (p * p)) * gs + (4.0 * s2 / (p * p * p)) * o);
      y += weight * (4.0 / p) * (kmat * o - k_red * o);
      dm.noalias() += y * n_bar * terms_[l].adjoint();
      dn.noalias() += y.transpose() * m_bar * terms_[l].conjugate();
    }
    pack(dm, dn, grad);
    return value;
  }

  // Dominant output vector as a 4x4 (AA' x BB') matrix; zero if the output vanishes.
  Mat4 top_vector(const FilterPair& f) const {
    const auto outs = outputs(f);
    const MatX g = gram(outs);
    Mat4 top = Mat4::Zero();
    if (!(g.trace().real() > 0.0)) return top;
    Eigen::SelfAdjointEigenSolver<MatX> es(g);
    const VecX u = es.eigenvectors().col(g.rows() - 1);
    for (Eigen::Index k = 0; k < g.rows(); ++k) top += u(k) * outs[static_cast<std::size_t>(k)];
    return top;
  }

 private:
  std::vector<Mat4> terms_;
};

class StageCost final : public ceres::FirstOrderFunction {
 public:
  StageCost(const FilterModel& model, double weight) : model_(model), weight_(weight) {}
  bool Evaluate(const double* x, double* cost, double* grad) const override {
    *cost = model_.objective(x, weight_, grad);
    return std::isfinite(*cost);
  }
  int NumParameters() const override { return kParams; }

 private:
  const FilterModel& model_;
  double weight_;
};

// Restrict both filters to the Schmidt supports of the dominant output vector
// and equalize its two Schmidt weights on the AA' side. Both corrections are
// local filters of norm <= 1; the result is rescaled to unit norm.
FilterPair polish(const FilterPair& f, const Mat4& top) {
  Eigen::JacobiSVD<Mat4> svd(top, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& c = svd.singularValues();
  if (!(c(1) > 0.0)) return f;
  const Vec4 a1 = svd.matrixU().col(0), a2 = svd.matrixU().col(1);
  // top = U S V^dagger, so column k of the BB' factor is conj(V_k); n acts as n^T on it.
  const Vec4 b1 = svd.matrixV().col(0).conjugate(), b2 = svd.matrixV().col(1).conjugate();
  const Mat4 left = (c(1) / c(0)) * a1 * a1.adjoint() + a2 * a2.adjoint();
  const Mat4 right = b1 * b1.adjoint() + b2 * b2.adjoint();
  return normalized(FilterPair{left * f.m, right * f.n});
}

struct RestartOutcome {
  RestartSummary summary;
  FilterPair filters;
};

RestartOutcome run_restart(const FilterModel& model, const DensityMatrix2Q& rho,
                           const DensityMatrix2Q& sigma, const SearchConfig& cfg, int index) {
  std::mt19937_64 rng(splitmix64(cfg.seed ^ splitmix64(static_cast<std::uint64_t>(index) + 1)));
  std::normal_distribution<double> normal(0.0, kInitialScale);
  std::vector<double> x(kParams);
  for (auto& v : x) v = normal(rng);

  ceres::GradientProblemSolver::Options opts;
  opts.logging_type = ceres::SILENT;
  opts.function_tolerance = 1e-15;
  opts.gradient_tolerance = 1e-15;
  opts.parameter_tolerance = 1e-16;
  const int per_stage = std::max(1, cfg.iterations_per_restart / kStages);
  double weight = kFirstWeight;
  for (int stage = 0; stage < kStages; ++stage, weight *= 10.0) {
    opts.max_num_iterations =
        stage + 1 < kStages ? per_stage : std::max(1, cfg.iterations_per_restart - per_stage * stage);
    ceres::GradientProblem problem(new StageCost(model, weight));
    ceres::GradientProblemSolver::Summary summary;
    ceres::Solve(opts, problem, x.data(), &summary);
  }

  FilterPair cand = normalized(unpack(x.data()));
  cand = polish(cand, model.top_vector(cand));

  const auto ev = evaluate_filters(rho, sigma, cand.m, cand.n);
  RestartOutcome out;
  out.filters = cand;
  out.summary.probability = ev.probability;
  out.summary.purity = ev.purity;
  out.summary.schmidt_gap = ev.schmidt_gap;
  out.summary.feasible = ev.probability > 0.0 && 1.0 - ev.purity <= cfg.purity_eps &&
                         ev.schmidt_gap <= cfg.entanglement_eps;
  return out;
}

double violation(const RestartSummary& s) { return (1.0 - s.purity) + s.schmidt_gap; }

}  // namespace

FilterEvaluation evaluate_filters(const DensityMatrix2Q& rho, const DensityMatrix2Q& sigma,
                                  const Mat4& m, const Mat4& n) {
  const MatX w = filtered_output_factor(rho, sigma, m, n);
  FilterEvaluation ev;
  ev.probability = w.squaredNorm();
  if (!(ev.probability > 0.0)) {
    ev.schmidt_gap = 1.0;
    return ev;
  }
  Eigen::JacobiSVD<MatX> svd(w, Eigen::ComputeThinU);
  const Eigen::VectorXd weights = svd.singularValues().array().square() / ev.probability;
  ev.purity = weights.squaredNorm();
  const auto sd = schmidt_decompose(svd.matrixU().col(0).normalized(), 4, 4, 1e-9);
  ev.schmidt = sd.coefficients;
  const double half = 1.0 / std::sqrt(2.0);
  for (int k = 0; k < 4; ++k)
    ev.schmidt_gap = std::max(ev.schmidt_gap, std::abs(sd.coefficients(k) - (k < 2 ? half : 0.0)));
  return ev;
}

SearchResult search_best_protocol(const DensityMatrix2Q& rho, const DensityMatrix2Q& sigma,
                                  const SearchConfig& cfg) {
  cfg.validate();
  const FilterModel model(rho, sigma);
  std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(cfg.restarts));

  int threads = cfg.threads > 0 ? cfg.threads : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, cfg.restarts);
  const auto work = [&](int r) {
    outcomes[static_cast<std::size_t>(r)] = run_restart(model, rho, sigma, cfg, r);
  };
  if (threads == 1) {
    for (int r = 0; r < cfg.restarts; ++r) work(r);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (int r = next++; r < cfg.restarts; r = next++) work(r);
      });
    for (auto& th : pool) th.join();
  }

  // Highest feasible probability, else smallest violation; ties go to the
  // lower restart index.
  SearchResult res;
  int best = -1;
  for (int r = 0; r < cfg.restarts; ++r) {
    const auto& s = outcomes[static_cast<std::size_t>(r)].summary;
    res.restarts.push_back(s);
    if (s.feasible) ++res.feasible_restarts;
    if (best < 0) {
      best = r;
      continue;
    }
    const auto& b = outcomes[static_cast<std::size_t>(best)].summary;
    if (s.feasible != b.feasible) {
      if (s.feasible) best = r;
    } else if (s.feasible ? s.probability > b.probability : violation(s) < violation(b)) {
      best = r;
    }
  }
  const auto& win = outcomes[static_cast<std::size_t>(best)];
  res.best_restart = best;
  res.best_m = win.filters.m;
  res.best_n = win.filters.n;
  res.best_probability = std::clamp(win.summary.probability, 0.0, 1.0);
  res.output_purity = std::clamp(win.summary.purity, 0.0, 1.0);
  res.output_schmidt_gap = win.summary.schmidt_gap;
  res.feasible = win.summary.feasible;
  return res;
}

}  // namespace qpurify
