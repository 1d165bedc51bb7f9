#include "qpurify/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qpurify {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::TraceNotOne: return "TraceNotOne";
    case ErrorCode::NotFinite: return "NotFinite";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::DegenerateBasis: return "DegenerateBasis";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotWClass: return "NotWClass";
    case ErrorCode::RankDeficientPeel: return "RankDeficientPeel";
    case ErrorCode::InvalidParameters: return "InvalidParameters";
    case ErrorCode::InvalidForm: return "InvalidForm";
    case ErrorCode::OutputNotRankOne: return "OutputNotRankOne";
    case ErrorCode::ProbabilityMismatch: return "ProbabilityMismatch";
    case ErrorCode::NotMaximallyEntangled: return "NotMaximallyEntangled";
    case ErrorCode::ProductState: return "ProductState";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

std::string_view system_name(System s) {
  switch (s) {
    case System::A: return "A";
    case System::B: return "B";
    case System::Ap: return "A'";
    case System::Bp: return "B'";
  }
  return "?";
}

std::string order_label(const SystemOrder& order) {
  std::string out;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k) out += ',';
    out += system_name(order[k]);
  }
  return out;
}

std::string_view party_name(Party p) { return p == Party::AAp ? "AA'" : "BB'"; }

namespace {

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
  return true;
}

double hermiticity_defect(const MatX& h) {
  return (h - h.adjoint()).cwiseAbs().maxCoeff();
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

Qubit1State::Qubit1State(const Vec2& amps, double tol) : amps_(amps) {
  if (!all_finite(amps)) throw Error(ErrorCode::NotFinite, "qubit amplitudes");
  if (std::abs(amps.norm() - 1.0) > tol)
    throw Error(ErrorCode::NotNormalized, "qubit state norm " + fmt(amps.norm()));
}

Qubit1State Qubit1State::basis(int k) {
  Vec2 v = Vec2::Zero();
  v(k) = 1.0;
  return Qubit1State(v, Unchecked{});
}

Qubit1State Qubit1State::normalized(const Vec2& v) {
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw Error(ErrorCode::NotNormalized, "zero qubit vector");
  return Qubit1State(v / n, Unchecked{});
}

PureState2Q::PureState2Q(const Vec4& amps, double tol) : amps_(amps) {
  if (!all_finite(amps)) throw Error(ErrorCode::NotFinite, "two-qubit amplitudes");
  if (std::abs(amps.norm() - 1.0) > tol)
    throw Error(ErrorCode::NotNormalized, "two-qubit state norm " + fmt(amps.norm()));
}

PureState2Q PureState2Q::basis(int index) {
  Vec4 v = Vec4::Zero();
  v(index) = 1.0;
  return PureState2Q(v, Unchecked{});
}

PureState2Q PureState2Q::normalized(const Vec4& v) {
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw Error(ErrorCode::NotNormalized, "zero vector");
  return PureState2Q(v / n, Unchecked{});
}

PureState2Q PureState2Q::product(const Qubit1State& a, const Qubit1State& b) {
  Vec4 v;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) v(2 * i + j) = a.amplitudes()(i) * b.amplitudes()(j);
  return PureState2Q(v, Unchecked{});
}

PureState2Q PureState2Q::singlet() {
  const double s = 1.0 / std::sqrt(2.0);
  Vec4 v(0.0, s, -s, 0.0);
  return PureState2Q(v, Unchecked{});
}

DensityMatrix2Q DensityMatrix2Q::maximally_mixed() {
  return validate_density(Mat4::Identity() / 4.0);
}

DensityMatrix2Q DensityMatrix2Q::pure(const PureState2Q& psi) {
  return validate_density(psi.projector());
}

DensityMatrix4Q::DensityMatrix4Q(const Mat16& entries, const SystemOrder& order, double tol)
    : rho_(entries), order_(order) {
  if (!all_finite(entries)) throw Error(ErrorCode::NotFinite, "16x16 state");
  const double defect = hermiticity_defect(entries);
  if (defect > tol) throw Error(ErrorCode::NotHermitian, "defect " + fmt(defect));
  trace_ = entries.trace().real();
  if (trace_ > 1.0 + tol) throw Error(ErrorCode::TraceNotOne, "trace " + fmt(trace_) + " > 1");
  Eigen::SelfAdjointEigenSolver<Mat16> es(0.5 * (entries + entries.adjoint()),
                                          Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  if (lo < -tol) throw Error(ErrorCode::NotPositive, "min eigenvalue " + fmt(lo));
  normalized_ = std::abs(trace_ - 1.0) <= tol;
}

LocalOperator2Q::LocalOperator2Q(const Mat4& entries, Party party, double tol)
    : op_(entries), party_(party) {
  if (!all_finite(entries)) throw Error(ErrorCode::NotFinite, "local operator");
  const double norm = operator_norm();
  if (norm > 1.0 + tol)
    throw Error(ErrorCode::InvalidParameters, "operator norm " + fmt(norm) + " exceeds 1");
}

double LocalOperator2Q::operator_norm() const {
  Eigen::JacobiSVD<Mat4> svd(op_);
  return svd.singularValues()(0);
}

EigenDecomposition hermitian_eig(const MatX& h, double tol) {
  if (h.rows() != h.cols()) throw Error(ErrorCode::DimensionMismatch, "matrix not square");
  if (!all_finite(h)) throw Error(ErrorCode::NotFinite, "hermitian_eig input");
  const double defect = hermiticity_defect(h);
  if (defect > tol) throw Error(ErrorCode::NotHermitian, "defect " + fmt(defect));
  Eigen::SelfAdjointEigenSolver<MatX> es(0.5 * (h + h.adjoint()));
  const Eigen::Index n = h.rows();
  EigenDecomposition out{RealVecX(n), MatX(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = es.eigenvalues()(n - 1 - k);
    out.vectors.col(k) = es.eigenvectors().col(n - 1 - k);
  }
  return out;
}

DensityMatrix2Q validate_density(const Mat4& entries, double tol) {
  if (!all_finite(entries)) throw Error(ErrorCode::NotFinite, "density matrix entries");
  const double defect = hermiticity_defect(entries);
  if (defect > tol) throw Error(ErrorCode::NotHermitian, "defect " + fmt(defect));
  const double tr = entries.trace().real();
  if (std::abs(tr - 1.0) > tol) throw Error(ErrorCode::TraceNotOne, "trace " + fmt(tr));
  const Mat4 h = 0.5 * (entries + entries.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat4> es(h);
  Eigen::Vector4d ev;
  Mat4 vecs;
  for (int k = 0; k < 4; ++k) {
    ev(k) = es.eigenvalues()(3 - k);
    vecs.col(k) = es.eigenvectors().col(3 - k);
  }
  if (ev(3) < -tol) throw Error(ErrorCode::NotPositive, "most negative eigenvalue " + fmt(ev(3)));
  return DensityMatrix2Q(h, ev, vecs);
}

SchmidtDecomposition schmidt_decompose(const VecX& state, int dim_a, int dim_b, double tol) {
  if (state.size() != dim_a * dim_b)
    throw Error(ErrorCode::DimensionMismatch, "state size does not match dims");
  if (!all_finite(state)) throw Error(ErrorCode::NotFinite, "pure state");
  if (std::abs(state.norm() - 1.0) > tol)
    throw Error(ErrorCode::NotNormalized, "state norm " + fmt(state.norm()));
  MatX m(dim_a, dim_b);
  for (int a = 0; a < dim_a; ++a)
    for (int b = 0; b < dim_b; ++b) m(a, b) = state(a * dim_b + b);
  Eigen::JacobiSVD<MatX> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return SchmidtDecomposition{svd.singularValues(), svd.matrixU(), svd.matrixV().conjugate()};
}

MatX kron(const MatX& a, const MatX& b) {
  MatX out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

VecX kron(const VecX& a, const VecX& b) {
  VecX out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

DensityMatrix4Q kron(const DensityMatrix2Q& rho, const DensityMatrix2Q& sigma) {
  const Mat16 joint = kron(MatX(rho.matrix()), MatX(sigma.matrix()));
  return DensityMatrix4Q(joint, kOrderABApBp);
}

namespace {

// perm[o] = index in `from` ordering of the basis state labelled o in `to`.
std::array<int, 16> permutation_map(const SystemOrder& from, const SystemOrder& to) {
  std::array<int, 4> where{};  // where[j]: position in `to` of from[j]
  for (int j = 0; j < 4; ++j) {
    int found = -1;
    for (int k = 0; k < 4; ++k)
      if (to[k] == from[j]) found = k;
    if (found < 0) throw Error(ErrorCode::InvalidParameters, "target order is not a permutation");
    where[j] = found;
  }
  for (int j = 0; j < 4; ++j)
    for (int k = j + 1; k < 4; ++k)
      if (where[j] == where[k])
        throw Error(ErrorCode::InvalidParameters, "target order repeats a system");
  std::array<int, 16> perm{};
  for (int o = 0; o < 16; ++o) {
    int i = 0;
    for (int j = 0; j < 4; ++j) {
      const int bit = (o >> (3 - where[j])) & 1;
      i |= bit << (3 - j);
    }
    perm[o] = i;
  }
  return perm;
}

}  // namespace

Mat16 permute_systems(const Mat16& m, const SystemOrder& from, const SystemOrder& to) {
  const auto perm = permutation_map(from, to);
  Mat16 out;
  for (int r = 0; r < 16; ++r)
    for (int c = 0; c < 16; ++c) out(r, c) = m(perm[r], perm[c]);
  return out;
}

Vec16 permute_systems(const Vec16& v, const SystemOrder& from, const SystemOrder& to) {
  const auto perm = permutation_map(from, to);
  Vec16 out;
  for (int r = 0; r < 16; ++r) out(r) = v(perm[r]);
  return out;
}

DensityMatrix4Q permute_systems(const DensityMatrix4Q& state, const SystemOrder& target) {
  return DensityMatrix4Q(permute_systems(state.matrix(), state.order(), target), target);
}

Mat4 partial_transpose(const DensityMatrix2Q& state, Side side) {
  const Mat4& rho = state.matrix();
  Mat4 out;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int ap = 0; ap < 2; ++ap)
        for (int bp = 0; bp < 2; ++bp) {
          const int row = 2 * a + b, col = 2 * ap + bp;
          out(row, col) = side == Side::A ? rho(2 * ap + b, 2 * a + bp)
                                          : rho(2 * a + bp, 2 * ap + b);
        }
  return out;
}

double min_partial_transpose_eigenvalue(const DensityMatrix2Q& state) {
  Eigen::SelfAdjointEigenSolver<Mat4> es(partial_transpose(state, Side::B),
                                         Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

Mat2 reshape_to_matrix(const Vec4& v) {
  Mat2 m;
  m << v(0), v(1), v(2), v(3);
  return m;
}

Mat2 reshape_to_matrix(const PureState2Q& state) { return reshape_to_matrix(state.amplitudes()); }

}  // namespace qpurify
