#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "qpurify/canonical.hpp"
#include "qpurify/oracle.hpp"
#include "test_support.hpp"

using namespace qpurify;
using namespace qpurify::testing;

namespace {

Mat4 local(Rng& rng) { return kron(MatX(random_unitary2(rng)), MatX(random_unitary2(rng))); }

DensityMatrix2Q rotate(const DensityMatrix2Q& s, const Mat4& u) {
  return validate_density(u * s.matrix() * u.adjoint());
}

std::vector<DensityMatrix2Q> fixtures() {
  Mat4 r3 = Mat4::Zero();
  r3(0, 0) = 0.5;
  r3(1, 1) = 0.3;
  r3(2, 2) = 0.2;
  return {validate_density(w_state_matrix({0.5, 0.6, 0.8, 0.0})),
          validate_density(w_state_matrix({0.3, 0.4, std::sqrt(0.8), 0.2})),
          validate_density(phi_plus_00(0.5)),
          validate_density(r3),
          DensityMatrix2Q::maximally_mixed(),
          DensityMatrix2Q::pure(PureState2Q::singlet()),
          DensityMatrix2Q::pure(PureState2Q::basis(1))};
}

}  // namespace

TEST(StateProperty, SpectralReconstructionIsIdentity) {
  Rng rng(101);
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = validate_density(w_state_matrix(random_w_params(rng), random_unitary2(rng), random_unitary2(rng)));
    Mat4 rec = Mat4::Zero();
    for (int k = 0; k < 4; ++k)
      rec += s.eigenvalues()(k) * s.eigenvectors().col(k) * s.eigenvectors().col(k).adjoint();
    EXPECT_LE((rec - s.matrix()).norm(), 1e-10);
    const auto again = validate_density(rec);
    EXPECT_LE((again.matrix() - s.matrix()).norm(), 1e-10);
  }
}

TEST(StateProperty, SchmidtCoefficientsAreLocalUnitaryInvariant) {
  Rng rng(102);
  for (int trial = 0; trial < 100; ++trial) {
    const Vec4 v = random_vector4(rng);
    const auto a = schmidt_decompose(VecX(v), 2, 2);
    const auto b = schmidt_decompose(VecX(local(rng) * v), 2, 2);
    EXPECT_LE((a.coefficients - b.coefficients).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_LE((a.coefficients - reference_schmidt_2x2(v)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(RangeProperty, ClassificationIsLocalUnitaryInvariant) {
  Rng rng(103);
  for (const auto& s : fixtures()) {
    const auto kind = classify_range(s).kind;
    for (int trial = 0; trial < 100; ++trial) EXPECT_EQ(classify_range(rotate(s, local(rng))).kind, kind);
  }
}

TEST(RangeProperty, ReturnedRaysAreProductMembers) {
  Rng rng(104);
  for (int trial = 0; trial < 300; ++trial) {
    const Subspace sub = trial % 3 == 0   ? random_generic_subspace(rng)
                         : trial % 3 == 1 ? random_w_subspace(rng)
                                          : random_subspace(rng, 3);
    const std::vector<ProductRay> rays =
        sub.dimension() == 2 ? classify_2d_subspace(sub).rays
                             : [&] {
                                 const auto d3 = product_basis_dim3(sub);
                                 return std::vector<ProductRay>(d3.rays.begin(), d3.rays.end());
                               }();
    EXPECT_FALSE(rays.empty());
    for (const auto& r : rays) {
      EXPECT_LE(sub.residual(r.vector()), 1e-8);
      EXPECT_LE(std::abs(reshape_to_matrix(r.vector()).determinant()), 1e-8);
    }
  }
}

TEST(RangeProperty, AgreesWithZeroSamplingOracle) {
  Rng rng(105);
  int disagreements = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const Subspace sub = trial % 5 == 0   ? random_w_subspace(rng)
                         : trial % 5 == 1 ? random_continuum_subspace(rng)
                                          : random_generic_subspace(rng);
    const auto kind = classify_2d_subspace(sub).kind;
    const auto count = sample_product_zeros(sub, 48);
    if (count.implied_kind() != kind) {
      ++disagreements;
      ADD_FAILURE() << "trial " << trial << ": classified " << range_kind_name(kind) << ", sampled "
                    << range_kind_name(count.implied_kind()) << " (" << count.zeros << " zeros, grid min "
                    << count.grid_min << ")";
    }
  }
  EXPECT_EQ(disagreements, 0);
}

TEST(RangeProperty, WClassStatesAreNpt) {
  Rng rng(106);
  for (int trial = 0; trial < 200; ++trial) {
    const auto s = validate_density(w_state_matrix(random_w_params(rng), random_unitary2(rng), random_unitary2(rng)));
    ASSERT_EQ(classify_range(s).kind, RangeKind::Dim2SingleProductRay);
    EXPECT_LT(min_partial_transpose_eigenvalue(s), -1e-9);
  }
}

TEST(CanonicalProperty, ParametersAreLocalUnitaryInvariant) {
  Rng rng(107);
  for (int trial = 0; trial < 40; ++trial) {
    const auto base = validate_density(w_state_matrix(random_w_params(rng), random_unitary2(rng), random_unitary2(rng)));
    const auto f0 = w_canonicalize(base);
    for (int k = 0; k < 5; ++k) {
      const auto f = w_canonicalize(rotate(base, local(rng)));
      EXPECT_NEAR(f.p(), f0.p(), 1e-8);
      EXPECT_NEAR(f.alpha(), f0.alpha(), 1e-8);
      EXPECT_NEAR(f.beta(), f0.beta(), 1e-8);
      EXPECT_NEAR(f.gamma(), f0.gamma(), 1e-8);
    }
  }
}

TEST(CanonicalProperty, RoundTripOverRandomForms) {
  Rng rng(108);
  for (int trial = 0; trial < 200; ++trial) {
    const auto w = random_w_params(rng);
    const WCanonicalForm f(w.p, w.alpha, w.beta, w.gamma, random_unitary2(rng), random_unitary2(rng));
    const auto s = reconstruct(f);
    EXPECT_EQ(classify_range(s).kind, RangeKind::Dim2SingleProductRay);
    const auto g = w_canonicalize(s);
    EXPECT_NEAR(g.p(), w.p, 1e-8);
    EXPECT_NEAR(g.alpha(), w.alpha, 1e-8);
    EXPECT_NEAR(g.beta(), w.beta, 1e-8);
    EXPECT_NEAR(g.gamma(), w.gamma, 1e-8);
    EXPECT_LE((reconstruct(g).matrix() - s.matrix()).norm(), 1e-9);
  }
}

TEST(CanonicalProperty, PeelIsExtremal) {
  Rng rng(109);
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = validate_density(w_state_matrix(random_w_params(rng), random_unitary2(rng), random_unitary2(rng)));
    const auto f = w_canonicalize(s);
    const Mat4 u = f.local_unitary();
    const Mat4 rotated = u * s.matrix() * u.adjoint();
    Mat4 e00 = Mat4::Zero();
    e00(0, 0) = 1.0;
    const double peel = 1.0 - f.p();
    EXPECT_GE(min_eigenvalue(MatX(rotated - (peel - 1e-6) * e00)), -1e-12);
    for (double over : {1e-6, 1e-3, 0.1}) EXPECT_LT(min_eigenvalue(MatX(rotated - (peel + over) * e00)), -1e-14);
  }
}
