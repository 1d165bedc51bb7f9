#include <gtest/gtest.h>

#include <cmath>

#include "qpurify/oracle.hpp"
#include "qpurify/range.hpp"
#include "test_support.hpp"

using namespace qpurify;
using qpurify::testing::Rng;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

Vec4 ket(int index) {
  Vec4 v = Vec4::Zero();
  v(index) = 1.0;
  return v;
}

// |<x|y>| for unit vectors: 1 iff they span the same ray.
double overlap(const Vec4& x, const Vec4& y) { return std::abs(x.normalized().dot(y.normalized())); }

bool has_ray(const std::vector<ProductRay>& rays, const Vec4& target) {
  for (const auto& r : rays)
    if (overlap(r.vector(), target) > 1 - 1e-10) return true;
  return false;
}

}  // namespace

TEST(RangeBasis, Examples) {
  Mat4 p00 = Mat4::Zero();
  p00(0, 0) = 1.0;
  const auto pure = range_basis(validate_density(p00));
  ASSERT_EQ(pure.dimension(), 1);
  EXPECT_NEAR(overlap(pure.basis()[0].amplitudes(), ket(0)), 1.0, 1e-14);

  const Vec4 singlet = PureState2Q::singlet().amplitudes();
  const Mat4 mix = 0.5 * p00 + 0.5 * singlet * singlet.adjoint();
  const auto two = range_basis(validate_density(mix));
  ASSERT_EQ(two.dimension(), 2);
  EXPECT_LE(two.residual(ket(0)), 1e-14);
  EXPECT_LE(two.residual(singlet), 1e-14);

  EXPECT_EQ(range_basis(DensityMatrix2Q::maximally_mixed()).dimension(), 4);
}

TEST(Subspace, RejectsNonOrthonormal) {
  std::vector<PureState2Q> basis{PureState2Q::basis(0), PureState2Q::normalized(Vec4(1, 1, 0, 0))};
  try {
    Subspace s(basis);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateBasis);
  }
}

TEST(Classify2d, TwoRaysOnDiagonal) {
  const auto sub = Subspace::span({ket(0), ket(3)});
  const auto an = analyze_2d_subspace(sub);
  EXPECT_EQ(an.range_class.kind, RangeKind::Dim2ProductSpannedTwoRays);
  ASSERT_EQ(an.range_class.rays.size(), 2u);
  EXPECT_TRUE(has_ray(an.range_class.rays, ket(0)));
  EXPECT_TRUE(has_ray(an.range_class.rays, ket(3)));
}

TEST(Classify2d, SingleRayWClass) {
  const Vec4 w = (ket(1) + ket(2)) * kInvSqrt2;
  const auto sub = Subspace(std::vector<PureState2Q>{PureState2Q::basis(0), PureState2Q(w)});
  const auto an = analyze_2d_subspace(sub);
  EXPECT_EQ(an.range_class.kind, RangeKind::Dim2SingleProductRay);
  ASSERT_EQ(an.range_class.rays.size(), 1u);
  EXPECT_TRUE(has_ray(an.range_class.rays, ket(0)));
  // det(a|00> + b W) = -b^2 / 2
  EXPECT_NEAR(std::abs(an.quadratic.c20), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(an.quadratic.c11), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(an.quadratic.c02 + 0.5), 0.0, 1e-15);
}

TEST(Classify2d, BellPairSpanHasTwoRays) {
  const Vec4 v = (ket(0) + ket(3)) * kInvSqrt2;
  const Vec4 w = (ket(1) + ket(2)) * kInvSqrt2;
  const auto rc = classify_2d_subspace(Subspace(std::vector<PureState2Q>{PureState2Q(v), PureState2Q(w)}));
  EXPECT_EQ(rc.kind, RangeKind::Dim2ProductSpannedTwoRays);
  // a = +-b: |++> and |-->
  EXPECT_TRUE(has_ray(rc.rays, Vec4(1, 1, 1, 1)));
  EXPECT_TRUE(has_ray(rc.rays, Vec4(1, -1, -1, 1)));
  for (const auto& r : rc.rays) EXPECT_LE(std::abs(reshape_to_matrix(r.vector()).determinant()), 1e-12);
}

TEST(Classify2d, ContinuumWhenEveryMemberIsProduct) {
  const auto rc = classify_2d_subspace(Subspace::span({ket(0), ket(1)}));
  EXPECT_EQ(rc.kind, RangeKind::Dim2ProductSpannedContinuum);
  EXPECT_TRUE(rc.rays.empty());
}

TEST(Classify2d, RejectsWrongDimension) {
  try {
    classify_2d_subspace(Subspace::span({ket(0)}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

TEST(DeterminantQuadratic, MatchesDirectDeterminant) {
  Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const Vec4 v = qpurify::testing::random_vector4(rng);
    const Vec4 w = qpurify::testing::random_vector4(rng);
    const auto q = determinant_quadratic(v, w);
    const Complex a = qpurify::testing::complex_normal(rng), b = qpurify::testing::complex_normal(rng);
    const Mat2 m = reshape_to_matrix(Vec4(a * v + b * w));
    const Complex direct = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    EXPECT_NEAR(std::abs(q.evaluate(a, b) - direct), 0.0, 1e-12);
  }
}

TEST(ProductBasisDim3, SingletComplement) {
  const auto sub = Subspace::span({ket(0), ket(3), (ket(1) + ket(2)) * kInvSqrt2});
  const auto d3 = product_basis_dim3(sub);
  EXPECT_NEAR(d3.alpha, kInvSqrt2, 1e-12);
  EXPECT_NEAR(d3.beta, kInvSqrt2, 1e-12);
  Eigen::Matrix3cd gram;
  for (int i = 0; i < 3; ++i) {
    EXPECT_LE(sub.residual(d3.rays[i].vector()), 1e-12);
    for (int j = 0; j < 3; ++j) gram(i, j) = d3.rays[i].vector().dot(d3.rays[j].vector());
  }
  EXPECT_GT(std::abs(gram.determinant()), 1e-3);
}

TEST(ProductBasisDim3, ComplementOfZeroZero) {
  const auto sub = Subspace::span({ket(1), ket(2), ket(3)});
  const auto d3 = product_basis_dim3(sub);
  EXPECT_NEAR(d3.alpha, 1.0, 1e-12);
  EXPECT_NEAR(d3.beta, 0.0, 1e-12);
  std::vector<ProductRay> rays(d3.rays.begin(), d3.rays.end());
  EXPECT_TRUE(has_ray(rays, ket(2)));               // |10>
  EXPECT_TRUE(has_ray(rays, ket(1)));               // |01>
  EXPECT_TRUE(has_ray(rays, Vec4(0, 0, 1, 1)));     // |1>(|0> + |1>)/sqrt2
  EXPECT_LE(d3.max_residual, 1e-12);
}

TEST(ProductBasisDim3, UnequalSchmidtComplement) {
  const Vec4 perp(0.8, 0, 0, 0.6);
  const auto sub = Subspace::span({ket(1), ket(2), Vec4(0.6, 0, 0, -0.8)});
  const auto d3 = product_basis_dim3(sub);
  EXPECT_NEAR(d3.alpha, 0.8, 1e-12);
  EXPECT_NEAR(d3.beta, 0.6, 1e-12);
  EXPECT_NEAR(overlap(d3.orthocomplement, perp), 1.0, 1e-12);
  for (const auto& r : d3.rays) {
    EXPECT_LE(sub.residual(r.vector()), 1e-9);
    EXPECT_LE(std::abs(reshape_to_matrix(r.vector()).determinant()), 1e-12);
  }
}

TEST(ClassifyRange, Examples) {
  const auto w = validate_density(qpurify::testing::w_state_matrix({0.5, kInvSqrt2, kInvSqrt2, 0.0}));
  const auto rc = classify_range(w);
  EXPECT_EQ(rc.kind, RangeKind::Dim2SingleProductRay);
  ASSERT_EQ(rc.rays.size(), 1u);
  EXPECT_TRUE(has_ray(rc.rays, ket(0)));

  const auto mix = validate_density(qpurify::testing::phi_plus_00(0.5));
  const auto rep = analyze_range(mix);
  EXPECT_EQ(rep.range_class.kind, RangeKind::Dim2ProductSpannedTwoRays);
  EXPECT_TRUE(has_ray(rep.range_class.rays, ket(0)));
  EXPECT_TRUE(has_ray(rep.range_class.rays, ket(3)));
  EXPECT_LT(rep.min_partial_transpose_eigenvalue, 0.0);

  EXPECT_EQ(classify_range(DensityMatrix2Q::maximally_mixed()).kind, RangeKind::Dim4FullSpace);
}

TEST(ClassifyRange, RankOneAndRankThree) {
  EXPECT_EQ(classify_range(DensityMatrix2Q::pure(PureState2Q::singlet())).kind, RangeKind::Dim1Entangled);
  EXPECT_EQ(classify_range(DensityMatrix2Q::pure(PureState2Q::basis(2))).kind, RangeKind::Dim1Product);
  Mat4 r3 = Mat4::Zero();
  r3(0, 0) = r3(1, 1) = r3(2, 2) = 1.0 / 3.0;
  const auto rep = analyze_range(validate_density(r3));
  EXPECT_EQ(rep.rank, 3);
  EXPECT_EQ(rep.range_class.kind, RangeKind::Dim3ProductSpanned);
  EXPECT_EQ(rep.range_class.rays.size(), 3u);
  EXPECT_LE(rep.max_ray_residual, 1e-9);
}

TEST(ClassifyRange, ReportsRankMargins) {
  // p close to 1 keeps rank 2; the kept margin shows how close the call was.
  const auto s = validate_density(qpurify::testing::w_state_matrix({1.0 - 1e-6, 0.6, 0.8, 0.0}));
  const auto rep = analyze_range(s);
  EXPECT_EQ(rep.range_class.kind, RangeKind::Dim2SingleProductRay);
  EXPECT_GT(rep.kept_margin, 1.0);
  EXPECT_LT(rep.kept_margin, 1e5);
  EXPECT_LT(rep.dropped_margin, 1.0);
}

TEST(Purifiable, SingleCopy) {
  Rng rng(32);
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = validate_density(qpurify::testing::w_state_matrix(qpurify::testing::random_w_params(rng)));
    const auto v = purifiable_single_copy(s);
    EXPECT_FALSE(v.purifiable);
    EXPECT_FALSE(v.reason.empty());
  }
  EXPECT_TRUE(purifiable_single_copy(DensityMatrix2Q::pure(PureState2Q::singlet())).purifiable);
  EXPECT_FALSE(purifiable_single_copy(DensityMatrix2Q::pure(PureState2Q::basis(0))).purifiable);
}

TEST(Purifiable, NCopies) {
  const auto w = validate_density(qpurify::testing::w_state_matrix({0.5, 0.6, 0.8, 0.0}));
  EXPECT_TRUE(purifiable_n_copies(w, 2));
  EXPECT_FALSE(purifiable_n_copies(w, 1));
  const auto mix = validate_density(qpurify::testing::phi_plus_00(0.5));
  EXPECT_FALSE(purifiable_n_copies(mix, 1000));
  try {
    purifiable_n_copies(w, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidParameters);
  }
}

TEST(Purifiable, ConstantFromTwoCopiesOn) {
  Rng rng(33);
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = validate_density(qpurify::testing::w_state_matrix(qpurify::testing::random_w_params(rng)));
    const bool two = purifiable_n_copies(s, 2);
    EXPECT_TRUE(two);
    for (int n = 3; n <= 8; ++n) EXPECT_EQ(purifiable_n_copies(s, n), two);
  }
}

TEST(RangeKindNames, RoundTrip) {
  for (auto k : {RangeKind::Dim1Product, RangeKind::Dim1Entangled, RangeKind::Dim2SingleProductRay,
                 RangeKind::Dim2ProductSpannedTwoRays, RangeKind::Dim2ProductSpannedContinuum,
                 RangeKind::Dim3ProductSpanned, RangeKind::Dim4FullSpace}) {
    EXPECT_EQ(range_kind_from_name(range_kind_name(k)), k);
  }
  EXPECT_FALSE(range_kind_from_name("Dim5").has_value());
}
