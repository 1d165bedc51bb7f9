#include "qpurify/canonical.hpp"

#include <cmath>
#include <sstream>

namespace qpurify {

namespace {

constexpr double kGammaSnap = 1e-12;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Unitary whose first row is e^dagger, so that it maps e to |0>.
Mat2 rotate_to_zero(const Vec2& e) {
  Mat2 u;
  u << std::conj(e(0)), std::conj(e(1)), -e(1), e(0);
  return u;
}

}  // namespace

WCanonicalForm::WCanonicalForm(double p, double alpha, double beta, double gamma, const Mat2& u_a,
                               const Mat2& u_b, double tol)
    : p_(p), alpha_(alpha), beta_(beta), gamma_(gamma), u_a_(u_a), u_b_(u_b) {
  for (double x : {p, alpha, beta, gamma})
    if (!std::isfinite(x)) throw Error(ErrorCode::InvalidParameters, "non-finite parameter");
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorCode::InvalidParameters, "p = " + fmt(p) + " not in (0,1)");
  if (!(alpha > 0.0) || !(beta > 0.0))
    throw Error(ErrorCode::InvalidParameters, "alpha and beta must be positive");
  if (gamma < 0.0) throw Error(ErrorCode::InvalidParameters, "gamma must be nonnegative");
  const double norm2 = alpha * alpha + beta * beta + gamma * gamma;
  if (std::abs(norm2 - 1.0) > tol)
    throw Error(ErrorCode::InvalidParameters, "alpha^2 + beta^2 + gamma^2 = " + fmt(norm2));
  for (const Mat2* u : {&u_a_, &u_b_}) {
    const double defect = (*u * u->adjoint() - Mat2::Identity()).cwiseAbs().maxCoeff();
    if (defect > tol) throw Error(ErrorCode::InvalidParameters, "basis change not unitary");
  }
}

Mat4 WCanonicalForm::canonical_matrix() const {
  const Vec4 f = phi();
  Mat4 m = p_ * f * f.adjoint();
  m(0, 0) += 1.0 - p_;
  return m;
}

Mat4 WCanonicalForm::local_unitary() const { return kron(MatX(u_a_), MatX(u_b_)); }

DensityMatrix2Q reconstruct(const WCanonicalForm& form) {
  const Mat4 u = form.local_unitary();
  const Mat4 rho = u.adjoint() * form.canonical_matrix() * u;
  return validate_density(0.5 * (rho + rho.adjoint()));
}

WCanonicalForm w_canonicalize(const DensityMatrix2Q& state, const Tolerances& tols) {
  return w_canonicalize(state, tols, nullptr);
}

WCanonicalForm w_canonicalize(const DensityMatrix2Q& state, const Tolerances& tols,
                              PeelDiagnostics* diagnostics) {
  const auto cls = classify_range(state, tols);
  if (!is_w_class(cls.kind))
    throw Error(ErrorCode::NotWClass, "range is " + std::string(range_kind_name(cls.kind)));

  // Step 1: the unique product ray goes to |00>.
  const ProductRay& ray = cls.rays.front();
  const Mat2 ua0 = rotate_to_zero(ray.factor_a.amplitudes());
  const Mat2 ub0 = rotate_to_zero(ray.factor_b.amplitudes());
  const Mat4 u0 = kron(MatX(ua0), MatX(ub0));
  Mat4 rotated = u0 * state.matrix() * u0.adjoint();
  rotated = 0.5 * (rotated + rotated.adjoint());

  // Step 2: remove the largest multiple of |00><00| that keeps the state PSD.
  const auto eig = hermitian_eig(rotated, tols.validation);
  const double cut = tols.rank * eig.values(0);
  Mat4 pinv = Mat4::Zero();
  for (int k = 0; k < 4; ++k)
    if (eig.values(k) > cut) pinv += eig.vectors.col(k) * eig.vectors.col(k).adjoint() / eig.values(k);
  const double peel = 1.0 / pinv(0, 0).real();
  Mat4 remainder = rotated;
  remainder(0, 0) -= peel;

  const auto rem = hermitian_eig(remainder, tols.validation);
  if (diagnostics) *diagnostics = PeelDiagnostics{peel, rem.values(1), rem.values(3)};
  if (std::abs(rem.values(1)) > tols.validation || rem.values(3) < -tols.validation)
    throw Error(ErrorCode::RankDeficientPeel,
                "remainder eigenvalues " + fmt(rem.values(1)) + ", " + fmt(rem.values(3)));

  // Step 3: normalized remainder.
  const double p = remainder.trace().real();
  const Vec4 phi = rem.vectors.col(0);

  // Step 4: absorb phases into diagonal local unitaries.
  const Complex g = phi(0), a = phi(1), b = phi(2);
  const bool snapped = std::abs(g) < kGammaSnap;
  const double chi = snapped ? 0.0 : -std::arg(g);
  const double theta_b = -std::arg(a) - chi;
  const double theta_a = -std::arg(b) - chi;
  Mat2 da = Mat2::Identity(), db = Mat2::Identity();
  da(1, 1) = std::polar(1.0, theta_a);
  db(1, 1) = std::polar(1.0, theta_b);

  double alpha = std::abs(a), beta = std::abs(b), gamma = snapped ? 0.0 : std::abs(g);
  const double n = std::sqrt(alpha * alpha + beta * beta + gamma * gamma);
  alpha /= n;
  beta /= n;
  gamma /= n;
  if (!(alpha > 0.0) || !(beta > 0.0))
    throw Error(ErrorCode::NotWClass, "excitation amplitude vanished after peel");

  WCanonicalForm form(p, alpha, beta, gamma, da * ua0, db * ub0, tols.validation);
  form.gamma_snapped_ = snapped;
  return form;
}

}  // namespace qpurify
