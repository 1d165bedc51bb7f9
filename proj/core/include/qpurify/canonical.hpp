#pragma once

// W-class normal form of a rank-2 two-qubit state:
//
//   (u_a (x) u_b) rho (u_a (x) u_b)^dagger = p |Phi><Phi| + (1 - p) |00><00|,
//   Phi = alpha |01> + beta |10> + gamma |00>,
//
// with alpha, beta > 0, gamma >= 0 and alpha^2 + beta^2 + gamma^2 = 1.

#include "qpurify/qstate.hpp"
#include "qpurify/range.hpp"

namespace qpurify {

class WCanonicalForm {
 public:
  // Throws InvalidParameters when p is outside (0, 1), alpha or beta is not
  // positive, gamma is negative, the amplitudes are not normalized, or a
  // basis change is not unitary.
  WCanonicalForm(double p, double alpha, double beta, double gamma,
                 const Mat2& u_a = Mat2::Identity(), const Mat2& u_b = Mat2::Identity(),
                 double tol = 1e-9);

  double p() const { return p_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double gamma() const { return gamma_; }
  const Mat2& u_a() const { return u_a_; }
  const Mat2& u_b() const { return u_b_; }
  bool gamma_snapped() const { return gamma_snapped_; }

  Vec4 phi() const { return Vec4(gamma_, alpha_, beta_, 0.0); }
  // p |Phi><Phi| + (1 - p) |00><00| before undoing the basis change.
  Mat4 canonical_matrix() const;
  // u_a (x) u_b
  Mat4 local_unitary() const;

 private:
  friend WCanonicalForm w_canonicalize(const DensityMatrix2Q&, const Tolerances&, struct PeelDiagnostics*);

  double p_, alpha_, beta_, gamma_;
  Mat2 u_a_, u_b_;
  bool gamma_snapped_ = false;
};

struct PeelDiagnostics {
  double peel_weight = 0.0;          // 1 - p
  double remainder_second_eig = 0.0;  // should vanish
  double remainder_min_eig = 0.0;
};

// Throws NotWClass unless the range holds exactly one product ray, and
// RankDeficientPeel when the peeled remainder is not rank one within tol.
WCanonicalForm w_canonicalize(const DensityMatrix2Q& state, const Tolerances& tols = {});
WCanonicalForm w_canonicalize(const DensityMatrix2Q& state, const Tolerances& tols,
                              PeelDiagnostics* diagnostics);

DensityMatrix2Q reconstruct(const WCanonicalForm& form);

}  // namespace qpurify
