#pragma once

// Independent numerical checks of the analytic results:
//  * a grid-and-refine count of product rays in a two-dimensional subspace,
//    which never forms the determinant quadratic;
//  * a seeded multi-start gradient search over pairs of local filters for the
//    largest probability of producing a pure maximally entangled output.

#include <cstdint>
#include <vector>

#include "qpurify/qstate.hpp"
#include "qpurify/range.hpp"

namespace qpurify {

struct ProductZeroOptions {
  double zero_tol = 1e-9;        // |det| accepted as a zero after refinement
  double merge_distance = 1e-4;  // Fubini-Study distance merging refined zeros
  double continuum_fraction = 0.5;
};

struct ProductZeroCount {
  int zeros = 0;
  bool continuum = false;
  std::vector<Vec4> zero_vectors;
  double grid_min = 0.0;
  double grid_max = 0.0;

  // The RangeKind this count corresponds to (two zeros, one, or continuum).
  RangeKind implied_kind() const;
};

// Samples cos(t) V + e^{i f} sin(t) W on a (t, f) grid with grid_points steps
// in t and 2 * grid_points in f, refines local minima of |det| and counts
// the distinct zeros.
ProductZeroCount sample_product_zeros(const Subspace& sub, int grid_points,
                                      const ProductZeroOptions& opts = {});

struct SearchConfig {
  std::uint64_t seed = 20020214;
  int restarts = 64;
  int iterations_per_restart = 2000;
  double purity_eps = 1e-10;
  double entanglement_eps = 1e-8;
  int threads = 0;  // 0: hardware concurrency; results do not depend on it

  void validate() const;
};

struct RestartSummary {
  double probability = 0.0;
  double purity = 0.0;
  double schmidt_gap = 0.0;
  bool feasible = false;
};

struct SearchResult {
  double best_probability = 0.0;
  Mat4 best_m = Mat4::Zero();  // on (A, A')
  Mat4 best_n = Mat4::Zero();  // on (B, B')
  double output_purity = 0.0;
  double output_schmidt_gap = 0.0;
  bool feasible = false;
  int best_restart = -1;
  int feasible_restarts = 0;
  std::vector<RestartSummary> restarts;
};

// Exact figures of merit of a filter pair applied to rho (x) sigma.
struct FilterEvaluation {
  double probability = 0.0;  // trace of the unnormalized output
  double purity = 0.0;       // of the normalized output
  double schmidt_gap = 0.0;  // max_k |s_k - (1/sqrt2, 1/sqrt2, 0, 0)_k| of the dominant vector
  RealVecX schmidt;
};

FilterEvaluation evaluate_filters(const DensityMatrix2Q& rho, const DensityMatrix2Q& sigma,
                                  const Mat4& m, const Mat4& n);

SearchResult search_best_protocol(const DensityMatrix2Q& rho, const DensityMatrix2Q& sigma,
                                  const SearchConfig& cfg = {});

}  // namespace qpurify
