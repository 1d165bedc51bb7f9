#include "qpurify/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qpurify {

namespace {

constexpr double kTieTol = 1e-12;
constexpr double kStateConsistencyTol = 1e-8;
constexpr double kRankOneRatio = 1e-10;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

double optimal_probability(const WCanonicalForm& a, const WCanonicalForm& b) {
  const double x = a.alpha() * b.beta();  // alpha beta'
  const double y = b.alpha() * a.beta();  // alpha' beta
  return 2.0 * a.p() * b.p() * std::min(x * x, y * y);
}

ProtocolOperators build_protocol(const WCanonicalForm& canon_a, const WCanonicalForm& canon_b) {
  const double x = canon_a.alpha() * canon_b.beta();
  const double y = canon_b.alpha() * canon_a.beta();
  if (!(x > 0.0) || !(y > 0.0)) throw Error(ErrorCode::InvalidForm, "vanishing excitation amplitude");
  const bool tie = std::abs(x - y) <= kTieTol;
  const double c = std::min(x, y);

  // Canonical frame, AA' basis |A A'>: |01> carries alpha beta', |10> carries alpha' beta.
  Mat4 m = Mat4::Zero(), n = Mat4::Zero();
  m(1, 1) = tie ? 1.0 : c / x;
  m(2, 2) = tie ? 1.0 : c / y;
  n(1, 1) = 1.0;
  n(2, 2) = 1.0;

  const Mat4 ua = kron(MatX(canon_a.u_a()), MatX(canon_b.u_a()));
  const Mat4 ub = kron(MatX(canon_a.u_b()), MatX(canon_b.u_b()));
  return ProtocolOperators{LocalOperator2Q(m * ua, Party::AAp),
                           LocalOperator2Q(n * ub, Party::BBp),
                           optimal_probability(canon_a, canon_b),
                           canon_a,
                           canon_b,
                           tie};
}

Mat16 joint_state(const DensityMatrix2Q& rho, const DensityMatrix2Q& sigma) {
  const Mat16 j = kron(MatX(rho.matrix()), MatX(sigma.matrix()));
  return permute_systems(j, kOrderABApBp, kOrderAApBBp);
}

Mat16 apply_filters(const Mat16& joint, const Mat4& m, const Mat4& n) {
  const Mat16 f = kron(MatX(m), MatX(n));
  return f * joint * f.adjoint();
}

MatX filtered_output_factor(const DensityMatrix2Q& rho, const DensityMatrix2Q& sigma, const Mat4& m,
                            const Mat4& n, double rank_tol) {
  const auto kept = [rank_tol](const DensityMatrix2Q& s) {
    int r = 0;
    while (r < 4 && s.eigenvalues()(r) > rank_tol * s.eigenvalues()(0)) ++r;
    return r;
  };
  const int ra = kept(rho), rb = kept(sigma);
  const Mat16 f = kron(MatX(m), MatX(n));
  MatX w(16, ra * rb);
  for (int i = 0; i < ra; ++i)
    for (int j = 0; j < rb; ++j) {
      const double weight = std::sqrt(rho.eigenvalues()(i) * sigma.eigenvalues()(j));
      const Vec16 v = kron(VecX(rho.eigenvectors().col(i)), VecX(sigma.eigenvectors().col(j)));
      w.col(i * rb + j) = weight * (f * permute_systems(v, kOrderABApBp, kOrderAApBBp));
    }
  return w;
}

PurificationReport apply_protocol(const DensityMatrix2Q& rho, const DensityMatrix2Q& sigma,
                                  const ProtocolOperators& ops, const Tolerances& tols) {
  const double da = (reconstruct(ops.canon_a).matrix() - rho.matrix()).norm();
  const double db = (reconstruct(ops.canon_b).matrix() - sigma.matrix()).norm();
  if (da > kStateConsistencyTol || db > kStateConsistencyTol)
    throw Error(ErrorCode::InvalidForm, "states do not match the protocol's canonical forms");

  PurificationReport rep;
  rep.tolerances = tols;
  rep.operators = ops;

  const MatX w = filtered_output_factor(rho, sigma, ops.m_aa.matrix(), ops.n_bb.matrix(), tols.rank);
  const Mat16 out = w * w.adjoint();
  const DensityMatrix4Q filtered(out, kOrderAApBBp, tols.validation);
  rep.output_matrix = out;
  rep.probability = w.squaredNorm();

  Eigen::JacobiSVD<MatX> svd(w, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double first = sv(0) * sv(0);
  const double second = sv.size() > 1 ? sv(1) * sv(1) : 0.0;
  rep.rank_ratio = first > 0.0 ? second / first : 1.0;
  if (!(first > 0.0) || rep.rank_ratio > kRankOneRatio)
    throw Error(ErrorCode::OutputNotRankOne, "eigenvalue ratio " + fmt(rep.rank_ratio));

  if (std::abs(rep.probability - ops.expected_probability) > tols.certification)
    throw Error(ErrorCode::ProbabilityMismatch,
                "trace " + fmt(rep.probability) + " vs expected " + fmt(ops.expected_probability));

  const VecX v = svd.matrixU().col(0).normalized();
  rep.output_vector = Vec16(v);
  const auto sd = schmidt_decompose(v, 4, 4, tols.validation);
  rep.output_schmidt = sd.coefficients;
  const double half = 1.0 / std::sqrt(2.0);
  for (int k = 0; k < 4; ++k)
    rep.schmidt_margin = std::max(rep.schmidt_margin, std::abs(sd.coefficients(k) - (k < 2 ? half : 0.0)));
  if (rep.schmidt_margin > tols.certification)
    throw Error(ErrorCode::NotMaximallyEntangled, "Schmidt margin " + fmt(rep.schmidt_margin));

  // Only the alpha beta' |01>|10> and alpha' beta |10>|01> terms survive; gamma drops out.
  Vec16 expected = Vec16::Zero();
  expected(0b0110) = half;
  expected(0b1001) = half;
  rep.structure_overlap = std::abs(expected.dot(rep.output_vector.value()));

  rep.verdict = PairVerdict::Purifiable;
  rep.reason = ops.tie ? "purifiable (tie: alpha beta' = alpha' beta)" : "purifiable";
  return rep;
}

PurificationReport purify_pair(const DensityMatrix2Q& rho, const DensityMatrix2Q& sigma,
                               const Tolerances& tols) {
  const RangeReport ra = analyze_range(rho, tols);
  const RangeReport rb = analyze_range(sigma, tols);

  auto refuse = [&](std::string reason) {
    PurificationReport rep;
    rep.tolerances = tols;
    rep.range_a = ra;
    rep.range_b = rb;
    rep.reason = std::move(reason);
    return rep;
  };

  for (const auto* r : {&ra, &rb}) {
    const std::string which = r == &ra ? "first" : "second";
    if (r->rank == 1) {
      auto rep = refuse(which + " state has rank 1 (" +
                        std::string(range_kind_name(r->range_class.kind)) +
                        "); the pair protocol needs two rank-2 W-class states");
      const DensityMatrix2Q& s = r == &ra ? rho : sigma;
      if (r->range_class.kind == RangeKind::Dim1Entangled) {
        const auto step = procrustean_step(s.eigenvectors().col(0), 2, 2, tols.validation);
        rep.procrustean_probability = step.probability;
      }
      return rep;
    }
  }
  for (const auto* r : {&ra, &rb}) {
    if (!is_w_class(r->range_class.kind)) {
      const std::string which = r == &ra ? "first" : "second";
      return refuse(which + " state's range is " + std::string(range_kind_name(r->range_class.kind)) +
                    ": spanned by product states");
    }
  }

  const auto ca = w_canonicalize(rho, tols);
  const auto cb = w_canonicalize(sigma, tols);
  auto rep = apply_protocol(rho, sigma, build_protocol(ca, cb), tols);
  rep.range_a = ra;
  rep.range_b = rb;
  return rep;
}

ProcrusteanFilter procrustean_step(const VecX& pure, int dim_a, int dim_b, double tol) {
  auto sd = schmidt_decompose(pure, dim_a, dim_b, tol);
  if (sd.coefficients.size() < 2 || sd.coefficients(1) <= tol)
    throw Error(ErrorCode::ProductState, "second Schmidt coefficient vanishes");
  const double c1 = sd.coefficients(0), c2 = sd.coefficients(1);
  const VecX e1 = sd.left.col(0), e2 = sd.left.col(1);
  MatX f = (c2 / c1) * e1 * e1.adjoint() + e2 * e2.adjoint();
  return ProcrusteanFilter{std::move(f), 2.0 * c2 * c2, std::move(sd)};
}

}  // namespace qpurify
