#include "qpurify/range.hpp"

#include <algorithm>
#include <cmath>

namespace qpurify {

std::string_view range_kind_name(RangeKind kind) {
  switch (kind) {
    case RangeKind::Dim1Product: return "Dim1Product";
    case RangeKind::Dim1Entangled: return "Dim1Entangled";
    case RangeKind::Dim2SingleProductRay: return "Dim2SingleProductRay";
    case RangeKind::Dim2ProductSpannedTwoRays: return "Dim2ProductSpannedTwoRays";
    case RangeKind::Dim2ProductSpannedContinuum: return "Dim2ProductSpannedContinuum";
    case RangeKind::Dim3ProductSpanned: return "Dim3ProductSpanned";
    case RangeKind::Dim4FullSpace: return "Dim4FullSpace";
  }
  return "Unknown";
}

std::optional<RangeKind> range_kind_from_name(std::string_view name) {
  for (auto k : {RangeKind::Dim1Product, RangeKind::Dim1Entangled, RangeKind::Dim2SingleProductRay,
                 RangeKind::Dim2ProductSpannedTwoRays, RangeKind::Dim2ProductSpannedContinuum,
                 RangeKind::Dim3ProductSpanned, RangeKind::Dim4FullSpace})
    if (range_kind_name(k) == name) return k;
  return std::nullopt;
}

int range_kind_dimension(RangeKind kind) {
  switch (kind) {
    case RangeKind::Dim1Product:
    case RangeKind::Dim1Entangled: return 1;
    case RangeKind::Dim2SingleProductRay:
    case RangeKind::Dim2ProductSpannedTwoRays:
    case RangeKind::Dim2ProductSpannedContinuum: return 2;
    case RangeKind::Dim3ProductSpanned: return 3;
    case RangeKind::Dim4FullSpace: return 4;
  }
  return 0;
}

Subspace::Subspace(std::vector<PureState2Q> basis, double tol) : basis_(std::move(basis)), tol_(tol) {
  if (basis_.empty() || basis_.size() > 4)
    throw Error(ErrorCode::DegenerateBasis, "subspace basis must hold 1 to 4 vectors");
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    if (std::abs(basis_[i].amplitudes().norm() - 1.0) > tol)
      throw Error(ErrorCode::DegenerateBasis, "basis vector not unit norm");
    for (std::size_t j = i + 1; j < basis_.size(); ++j)
      if (std::abs(basis_[i].amplitudes().dot(basis_[j].amplitudes())) > tol)
        throw Error(ErrorCode::DegenerateBasis, "basis vectors not orthogonal");
  }
}

Subspace Subspace::span(const std::vector<Vec4>& vectors, double tol) {
  if (vectors.empty()) throw Error(ErrorCode::DegenerateBasis, "empty spanning set");
  MatX m(4, static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t k = 0; k < vectors.size(); ++k) m.col(static_cast<Eigen::Index>(k)) = vectors[k];
  Eigen::ColPivHouseholderQR<MatX> qr(m);
  qr.setThreshold(tol);
  const auto r = qr.rank();
  if (r == 0) throw Error(ErrorCode::DegenerateBasis, "spanning set is zero");
  const MatX q = qr.householderQ() * MatX::Identity(4, r);
  std::vector<PureState2Q> basis;
  for (Eigen::Index k = 0; k < r; ++k) basis.push_back(PureState2Q::normalized(q.col(k)));
  return Subspace(std::move(basis), tol);
}

Mat4 Subspace::projector() const {
  Mat4 p = Mat4::Zero();
  for (const auto& b : basis_) p += b.projector();
  return p;
}

double Subspace::residual(const Vec4& v) const { return (v - projector() * v).norm(); }

double DeterminantQuadratic::relative_discriminant() const {
  const double s = scale();
  return s > 0.0 ? std::abs(discriminant()) / (s * s) : 0.0;
}

DeterminantQuadratic determinant_quadratic(const Vec4& v, const Vec4& w) {
  const Complex dv = reshape_to_matrix(v).determinant();
  const Complex dw = reshape_to_matrix(w).determinant();
  const Complex dsum = reshape_to_matrix(Vec4(v + w)).determinant();
  return DeterminantQuadratic{dv, dsum - dv - dw, dw};
}

ProductRay nearest_product_ray(const Vec4& v) {
  Eigen::JacobiSVD<Mat2> svd(reshape_to_matrix(v), Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vec2 a = svd.matrixU().col(0);
  const Vec2 b = svd.matrixV().col(0).conjugate();
  return ProductRay{Qubit1State::normalized(a), Qubit1State::normalized(b)};
}

namespace {

ProductRay ray_from_root(const Vec4& v, const Vec4& w, Complex a, Complex b) {
  const double n = std::hypot(std::abs(a), std::abs(b));
  const Vec4 x = (a / n) * v + (b / n) * w;
  return nearest_product_ray(x);
}

}  // namespace

TwoDimAnalysis analyze_2d_subspace(const Subspace& sub, const Tolerances& tols) {
  if (sub.dimension() != 2)
    throw Error(ErrorCode::DimensionMismatch, "classify_2d_subspace needs a 2-dim subspace");
  const Vec4& v = sub.basis()[0].amplitudes();
  const Vec4& w = sub.basis()[1].amplitudes();
  if (std::abs(v.dot(w)) > sub.tol() || std::abs(v.norm() - 1.0) > sub.tol() ||
      std::abs(w.norm() - 1.0) > sub.tol())
    throw Error(ErrorCode::DegenerateBasis, "basis not orthonormal");

  TwoDimAnalysis out{RangeClass{RangeKind::Dim2ProductSpannedContinuum, {}},
                     determinant_quadratic(v, w)};
  const auto& q = out.quadratic;

  // Orthonormal basis: basis scale is 1.
  const double zero_cut = tols.continuum;
  if (std::abs(q.c20) <= zero_cut && std::abs(q.c11) <= zero_cut && std::abs(q.c02) <= zero_cut)
    return out;

  if (q.relative_discriminant() <= tols.degeneracy) {
    // Double root a/b = -c11 / (2 c20), written homogeneously.
    const auto ray = std::abs(q.c20) >= std::abs(q.c02)
                         ? ray_from_root(v, w, -q.c11, 2.0 * q.c20)
                         : ray_from_root(v, w, 2.0 * q.c02, -q.c11);
    out.range_class = RangeClass{RangeKind::Dim2SingleProductRay, {ray}};
  } else {
    const Complex s = std::sqrt(q.discriminant());
    const Complex plus = q.c11 + s, minus = q.c11 - s;
    const Complex big = -0.5 * (std::abs(plus) >= std::abs(minus) ? plus : minus);
    // Roots a/b = big / c20 and a/b = c02 / big.
    out.range_class = RangeClass{RangeKind::Dim2ProductSpannedTwoRays,
                                 {ray_from_root(v, w, big, q.c20), ray_from_root(v, w, q.c02, big)}};
  }
  for (const auto& ray : out.range_class.rays) {
    const Vec4 x = ray.vector();
    out.max_ray_residual = std::max(out.max_ray_residual, sub.residual(x));
    out.max_ray_determinant =
        std::max(out.max_ray_determinant, std::abs(reshape_to_matrix(x).determinant()));
  }
  return out;
}

RangeClass classify_2d_subspace(const Subspace& sub, const Tolerances& tols) {
  return analyze_2d_subspace(sub, tols).range_class;
}

Dim3Construction product_basis_dim3(const Subspace& sub) {
  if (sub.dimension() != 3)
    throw Error(ErrorCode::DimensionMismatch, "product_basis_dim3 needs a 3-dim subspace");
  const Mat4 complement = Mat4::Identity() - sub.projector();
  const auto eig = hermitian_eig(complement, 1e-8);
  const VecX perp = eig.vectors.col(0).normalized();

  // perp = alpha |e0 f0> + beta |e1 f1>: alpha|00> + beta|11> in local Schmidt bases.
  const auto sd = schmidt_decompose(perp, 2, 2, 1e-8);
  const double alpha = sd.coefficients(0), beta = sd.coefficients(1);
  const Vec2 e0 = sd.left.col(0), e1 = sd.left.col(1);
  const Vec2 f0 = sd.right.col(0), f1 = sd.right.col(1);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

  Dim3Construction out{
      {ProductRay{Qubit1State::normalized(e1), Qubit1State::normalized(f0)},
       ProductRay{Qubit1State::normalized(e0), Qubit1State::normalized(f1)},
       ProductRay{Qubit1State::normalized(beta * e0 - alpha * e1),
                  Qubit1State::normalized(inv_sqrt2 * (f0 + f1))}},
      perp,
      alpha,
      beta};
  for (const auto& ray : out.rays) out.max_residual = std::max(out.max_residual, sub.residual(ray.vector()));
  return out;
}

Subspace range_basis(const DensityMatrix2Q& state, double rank_tol) {
  const auto& ev = state.eigenvalues();
  const double cut = rank_tol * ev(0);
  std::vector<PureState2Q> basis;
  for (int k = 0; k < 4; ++k)
    if (ev(k) > cut) basis.push_back(PureState2Q::normalized(state.eigenvectors().col(k)));
  return Subspace(std::move(basis), 1e-9);
}

RangeReport analyze_range(const DensityMatrix2Q& state, const Tolerances& tols) {
  RangeReport rep;
  rep.range_class = RangeClass{RangeKind::Dim4FullSpace, {}};
  rep.tolerances = tols;
  rep.eigenvalues = state.eigenvalues();
  rep.rank_threshold = tols.rank * rep.eigenvalues(0);
  const Subspace sub = range_basis(state, tols.rank);
  rep.rank = sub.dimension();
  rep.kept_margin = rep.eigenvalues(rep.rank - 1) / rep.rank_threshold;
  rep.dropped_margin = rep.rank < 4 ? std::max(0.0, rep.eigenvalues(rep.rank)) / rep.rank_threshold : 0.0;
  rep.min_partial_transpose_eigenvalue = min_partial_transpose_eigenvalue(state);

  switch (rep.rank) {
    case 1: {
      const Vec4& v = sub.basis()[0].amplitudes();
      const double det = std::abs(reshape_to_matrix(v).determinant());
      if (det <= tols.validation)
        rep.range_class = RangeClass{RangeKind::Dim1Product, {nearest_product_ray(v)}};
      else
        rep.range_class = RangeClass{RangeKind::Dim1Entangled, {}};
      break;
    }
    case 2: {
      auto two = analyze_2d_subspace(sub, tols);
      rep.range_class = std::move(two.range_class);
      rep.quadratic = two.quadratic;
      rep.max_ray_residual = two.max_ray_residual;
      break;
    }
    case 3: {
      auto three = product_basis_dim3(sub);
      rep.range_class =
          RangeClass{RangeKind::Dim3ProductSpanned, {three.rays.begin(), three.rays.end()}};
      rep.max_ray_residual = three.max_residual;
      break;
    }
    default:
      break;
  }
  return rep;
}

RangeClass classify_range(const DensityMatrix2Q& state, const Tolerances& tols) {
  return analyze_range(state, tols).range_class;
}

Verdict purifiable_single_copy(const DensityMatrix2Q& state, const Tolerances& tols) {
  const auto kind = classify_range(state, tols).kind;
  if (kind == RangeKind::Dim1Entangled) return {true, "already a pure entangled state"};
  if (kind == RangeKind::Dim1Product) return {false, "pure product state"};
  return {false, "mixed state: local filters on one copy would need full rank, which cannot map "
                 "distinct range vectors onto one pure state"};
}

bool purifiable_n_copies(const DensityMatrix2Q& state, int n, const Tolerances& tols) {
  if (n < 1) throw Error(ErrorCode::InvalidParameters, "copy count must be positive");
  return n >= 2 && is_w_class(classify_range(state, tols).kind);
}

}  // namespace qpurify
