#pragma once

// Range extraction and product-state geometry of two-qubit subspaces.
//
// A two-qubit vector v is a product state iff det(reshape(v)) = 0. On a
// two-dimensional subspace span{V, W} the determinant of aV + bW is a
// homogeneous quadratic in (a, b), so the subspace holds either two product
// rays, exactly one (double root), or only product states (the quadratic
// vanishes identically). Three-dimensional subspaces are always spanned by
// product states.

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qpurify/qstate.hpp"

namespace qpurify {

class Subspace {
 public:
  // Throws DegenerateBasis unless the vectors are orthonormal within tol.
  explicit Subspace(std::vector<PureState2Q> basis, double tol = 1e-9);

  // Orthonormalizes an arbitrary spanning set (Householder QR).
  static Subspace span(const std::vector<Vec4>& vectors, double tol = 1e-9);

  int dimension() const { return static_cast<int>(basis_.size()); }
  const std::vector<PureState2Q>& basis() const { return basis_; }
  double tol() const { return tol_; }

  Mat4 projector() const;
  // Norm of the component of v orthogonal to the subspace.
  double residual(const Vec4& v) const;

 private:
  std::vector<PureState2Q> basis_;
  double tol_;
};

struct ProductRay {
  Qubit1State factor_a;
  Qubit1State factor_b;

  Vec4 vector() const { return PureState2Q::product(factor_a, factor_b).amplitudes(); }
};

enum class RangeKind {
  Dim1Product,
  Dim1Entangled,
  Dim2SingleProductRay,
  Dim2ProductSpannedTwoRays,
  Dim2ProductSpannedContinuum,
  Dim3ProductSpanned,
  Dim4FullSpace,
};

std::string_view range_kind_name(RangeKind kind);
std::optional<RangeKind> range_kind_from_name(std::string_view name);
int range_kind_dimension(RangeKind kind);

// A range that cannot be spanned by product states: the W-class case.
inline bool is_w_class(RangeKind kind) { return kind == RangeKind::Dim2SingleProductRay; }

struct RangeClass {
  RangeKind kind;
  std::vector<ProductRay> rays;  // 1, 2, 0 or 3 entries depending on kind
};

// det(aV + bW) = c20 a^2 + c11 ab + c02 b^2
struct DeterminantQuadratic {
  Complex c20;
  Complex c11;
  Complex c02;

  Complex discriminant() const { return c11 * c11 - 4.0 * c20 * c02; }
  double scale() const { return std::abs(c20) + std::abs(c11) + std::abs(c02); }
  // |disc| / scale^2; zero for a double root.
  double relative_discriminant() const;
  Complex evaluate(Complex a, Complex b) const { return c20 * a * a + c11 * a * b + c02 * b * b; }
};

DeterminantQuadratic determinant_quadratic(const Vec4& v, const Vec4& w);

struct TwoDimAnalysis {
  RangeClass range_class;
  DeterminantQuadratic quadratic;
  double max_ray_residual = 0.0;  // subspace membership of returned rays
  double max_ray_determinant = 0.0;
};

struct Dim3Construction {
  std::array<ProductRay, 3> rays;
  Vec4 orthocomplement;
  double alpha = 0.0;  // Schmidt coefficients of the orthocomplement vector
  double beta = 0.0;
  double max_residual = 0.0;
};

struct RangeReport {
  RangeClass range_class;
  int rank = 0;
  Eigen::Vector4d eigenvalues;
  double rank_threshold = 0.0;
  // Smallest kept eigenvalue over the threshold (>1 is safe) and largest
  // dropped eigenvalue over the threshold (<1 is safe, 0 when none dropped).
  double kept_margin = 0.0;
  double dropped_margin = 0.0;
  std::optional<DeterminantQuadratic> quadratic;
  double max_ray_residual = 0.0;
  double min_partial_transpose_eigenvalue = 0.0;
  Tolerances tolerances;
};

// Eigenvectors with eigenvalue above rank_tol * lambda_max.
Subspace range_basis(const DensityMatrix2Q& state, double rank_tol = 1e-9);

TwoDimAnalysis analyze_2d_subspace(const Subspace& sub, const Tolerances& tols = {});
RangeClass classify_2d_subspace(const Subspace& sub, const Tolerances& tols = {});

Dim3Construction product_basis_dim3(const Subspace& sub);

// Best rank-1 factorization of a two-qubit vector (top singular pair).
ProductRay nearest_product_ray(const Vec4& v);

RangeReport analyze_range(const DensityMatrix2Q& state, const Tolerances& tols = {});
RangeClass classify_range(const DensityMatrix2Q& state, const Tolerances& tols = {});

struct Verdict {
  bool purifiable;
  std::string reason;
};

Verdict purifiable_single_copy(const DensityMatrix2Q& state, const Tolerances& tols = {});

// Finite-copy purifiability of a mixed state: n >= 2 and a W-class range.
bool purifiable_n_copies(const DensityMatrix2Q& state, int n, const Tolerances& tols = {});

}  // namespace qpurify
