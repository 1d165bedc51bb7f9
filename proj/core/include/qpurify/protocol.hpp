#pragma once

// Optimal local filters that turn two W-class two-qubit states into a pure
// maximally entangled state of the parties AA' and BB'.

#include <optional>
#include <string>

#include "qpurify/canonical.hpp"
#include "qpurify/range.hpp"

namespace qpurify {

struct ProtocolOperators {
  LocalOperator2Q m_aa;  // acts on (A, A')
  LocalOperator2Q n_bb;  // acts on (B, B')
  double expected_probability;
  WCanonicalForm canon_a;  // form of rho (systems A, B)
  WCanonicalForm canon_b;  // form of sigma (systems A', B')
  bool tie = false;        // alpha beta' == alpha' beta within 1e-12
};

enum class PairVerdict { Purifiable, NotPurifiable };

struct PurificationReport {
  PairVerdict verdict = PairVerdict::NotPurifiable;
  std::string reason;
  double probability = 0.0;
  std::optional<ProtocolOperators> operators;
  // Normalized output vector on (A, A', B, B') and the unnormalized state.
  std::optional<Vec16> output_vector;
  std::optional<Mat16> output_matrix;
  RealVecX output_schmidt;  // across AA'|BB'
  double schmidt_margin = 0.0;
  double rank_ratio = 0.0;          // second / first eigenvalue of the output
  double structure_overlap = 0.0;   // |<expected two-term state | output>|
  RangeReport range_a;
  RangeReport range_b;
  // Set when an input is already pure: success probability of the
  // single-copy filter that would make it maximally entangled.
  std::optional<double> procrustean_probability;
  Tolerances tolerances;
};

// Success probability 2 p q min{alpha^2 beta'^2, alpha'^2 beta^2}.
double optimal_probability(const WCanonicalForm& a, const WCanonicalForm& b);

ProtocolOperators build_protocol(const WCanonicalForm& canon_a, const WCanonicalForm& canon_b);

// rho (x) sigma in order (A, B, A', B') reordered to (A, A', B, B').
Mat16 joint_state(const DensityMatrix2Q& rho, const DensityMatrix2Q& sigma);

// (m (x) n) J (m (x) n)^dagger on (A, A', B, B').
Mat16 apply_filters(const Mat16& joint, const Mat4& m, const Mat4& n);

// Factor W of the filtered output, output = W W^dagger on (A, A', B, B').
// Column (i, j) is (m (x) n) sqrt(l_i l'_j) (v_i (x) v'_j) over the
// eigenpairs of rho and sigma above rank_tol * lambda_max. Rank and purity
// read from the singular values of W stay accurate when the success
// probability is tiny, where the assembled 16x16 product loses them to
// cancellation.
MatX filtered_output_factor(const DensityMatrix2Q& rho, const DensityMatrix2Q& sigma, const Mat4& m,
                            const Mat4& n, double rank_tol = 1e-9);

PurificationReport apply_protocol(const DensityMatrix2Q& rho, const DensityMatrix2Q& sigma,
                                  const ProtocolOperators& ops, const Tolerances& tols = {});

PurificationReport purify_pair(const DensityMatrix2Q& rho, const DensityMatrix2Q& sigma,
                               const Tolerances& tols = {});

struct ProcrusteanFilter {
  MatX filter;  // acts on the first factor
  double probability;
  SchmidtDecomposition schmidt;
};

// Filter (c2/c1)|e1><e1| + |e2><e2| on the first party; output is
// maximally entangled over two Schmidt terms with probability 2 c2^2.
ProcrusteanFilter procrustean_step(const VecX& pure, int dim_a, int dim_b, double tol = 1e-9);

}  // namespace qpurify
