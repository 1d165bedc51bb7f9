#pragma once

// Dense linear algebra and validated state types for two qubits and for
// pairs of two-qubit systems.
//
// Basis convention: |ab> has index 2a + b; qubit 0 of a composite is the
// most significant bit. Composite states carry an explicit SystemOrder.

#include <optional>
#include <vector>

#include "qpurify/error.hpp"
#include "qpurify/types.hpp"

namespace qpurify {

class Qubit1State {
 public:
  // Throws NotNormalized unless |amps| = 1 within tol.
  explicit Qubit1State(const Vec2& amps, double tol = 1e-9);

  static Qubit1State basis(int k);
  // Rescales a nonzero vector to unit norm.
  static Qubit1State normalized(const Vec2& v);

  const Vec2& amplitudes() const { return amps_; }

 private:
  struct Unchecked {};
  Qubit1State(const Vec2& amps, Unchecked) : amps_(amps) {}
  Vec2 amps_;
};

class PureState2Q {
 public:
  explicit PureState2Q(const Vec4& amps, double tol = 1e-9);

  static PureState2Q basis(int index);
  static PureState2Q normalized(const Vec4& v);
  static PureState2Q product(const Qubit1State& a, const Qubit1State& b);
  // (|01> - |10>)/sqrt(2)
  static PureState2Q singlet();

  const Vec4& amplitudes() const { return amps_; }
  Mat4 projector() const { return amps_ * amps_.adjoint(); }

 private:
  struct Unchecked {};
  PureState2Q(const Vec4& amps, Unchecked) : amps_(amps) {}
  Vec4 amps_;
};

class DensityMatrix2Q {
 public:
  const Mat4& matrix() const { return rho_; }
  // Sorted descending.
  const Eigen::Vector4d& eigenvalues() const { return eigenvalues_; }
  const Mat4& eigenvectors() const { return eigenvectors_; }

  static DensityMatrix2Q maximally_mixed();
  static DensityMatrix2Q pure(const PureState2Q& psi);

 private:
  friend DensityMatrix2Q validate_density(const Mat4&, double);
  DensityMatrix2Q(const Mat4& rho, const Eigen::Vector4d& ev, const Mat4& vecs)
      : rho_(rho), eigenvalues_(ev), eigenvectors_(vecs) {}

  Mat4 rho_;
  Eigen::Vector4d eigenvalues_;
  Mat4 eigenvectors_;
};

// State of the four qubits A, B, A', B' in an explicit order. Trace <= 1:
// filtered states are sub-normalized and say so through is_normalized().
class DensityMatrix4Q {
 public:
  DensityMatrix4Q(const Mat16& entries, const SystemOrder& order, double tol = 1e-9);

  const Mat16& matrix() const { return rho_; }
  const SystemOrder& order() const { return order_; }
  double trace() const { return trace_; }
  bool is_normalized() const { return normalized_; }

 private:
  Mat16 rho_;
  SystemOrder order_;
  double trace_;
  bool normalized_;
};

class LocalOperator2Q {
 public:
  // Throws InvalidParameters when the largest singular value exceeds 1 + tol.
  LocalOperator2Q(const Mat4& entries, Party party, double tol = 1e-12);

  const Mat4& matrix() const { return op_; }
  Party party() const { return party_; }
  double operator_norm() const;

 private:
  Mat4 op_;
  Party party_;
};

struct EigenDecomposition {
  RealVecX values;  // descending
  MatX vectors;     // column k pairs with values(k)
};

struct SchmidtDecomposition {
  RealVecX coefficients;  // min(dA, dB) entries, descending, >= 0
  MatX left;              // dA x r, orthonormal columns
  MatX right;             // dB x r; state = sum_k c_k left_k (x) right_k
};

DensityMatrix2Q validate_density(const Mat4& entries, double tol = 1e-9);

// Throws NotHermitian when max |H - H^dagger| exceeds tol.
EigenDecomposition hermitian_eig(const MatX& h, double tol = 1e-9);

// Amplitude of |a b> is state(a * dB + b).
SchmidtDecomposition schmidt_decompose(const VecX& state, int dim_a, int dim_b, double tol = 1e-9);

MatX kron(const MatX& a, const MatX& b);
VecX kron(const VecX& a, const VecX& b);

DensityMatrix4Q kron(const DensityMatrix2Q& rho, const DensityMatrix2Q& sigma);

// Relabels qubits so that qubit k of the result is system target[k].
DensityMatrix4Q permute_systems(const DensityMatrix4Q& state, const SystemOrder& target);
Mat16 permute_systems(const Mat16& m, const SystemOrder& from, const SystemOrder& to);
Vec16 permute_systems(const Vec16& v, const SystemOrder& from, const SystemOrder& to);

Mat4 partial_transpose(const DensityMatrix2Q& state, Side side);
double min_partial_transpose_eigenvalue(const DensityMatrix2Q& state);

// Entry (a, b) = amplitude of |ab>. det == 0 iff the state is a product state.
Mat2 reshape_to_matrix(const PureState2Q& state);
Mat2 reshape_to_matrix(const Vec4& v);

}  // namespace qpurify
