#include <algorithm>
#include <cmath>
#include <numbers>

#include "qpurify/oracle.hpp"

namespace qpurify {

RangeKind ProductZeroCount::implied_kind() const {
  if (continuum) return RangeKind::Dim2ProductSpannedContinuum;
  return zeros == 1 ? RangeKind::Dim2SingleProductRay : RangeKind::Dim2ProductSpannedTwoRays;
}

namespace {

struct Line {
  Vec4 v, w;

  Vec4 point(double t, double f) const { return std::cos(t) * v + std::polar(std::sin(t), f) * w; }
  double abs_det(double t, double f) const {
    return std::abs(reshape_to_matrix(point(t, f)).determinant());
  }
};

// Newton iteration on the holomorphic g(z) = det(V + z W) (or det(z V + W)
// when |z| would exceed 1), started from a grid point. The derivative is a
// central difference, which only ever evaluates determinants.
Vec4 refine(const Line& line, double t, double f) {
  const bool near_v = t <= 0.25 * std::numbers::pi;
  Complex z = near_v ? std::polar(std::tan(t), f) : std::polar(1.0 / std::tan(t), -f);
  const auto point = [&](Complex c) -> Vec4 { return near_v ? Vec4(line.v + c * line.w) : Vec4(c * line.v + line.w); };
  const auto g = [&](Complex c) { return reshape_to_matrix(point(c)).determinant(); };
  constexpr double h = 1e-4;
  for (int it = 0; it < 200; ++it) {
    const Complex dg = (g(z + h) - g(z - h)) / (2.0 * h);
    if (std::abs(dg) == 0.0) break;
    const Complex step = g(z) / dg;
    z -= step;
    if (std::abs(z) > 1e6 || std::abs(step) <= 1e-16 * (1.0 + std::abs(z))) break;
  }
  return point(z).normalized();
}

}  // namespace

ProductZeroCount sample_product_zeros(const Subspace& sub, int grid_points,
                                      const ProductZeroOptions& opts) {
  if (sub.dimension() != 2)
    throw Error(ErrorCode::DimensionMismatch, "sample_product_zeros needs a 2-dim subspace");
  if (grid_points < 4) throw Error(ErrorCode::InvalidParameters, "grid_points must be >= 4");

  const Line line{sub.basis()[0].amplitudes(), sub.basis()[1].amplitudes()};
  const int nt = grid_points + 1;
  const int nf = 2 * grid_points;
  const double dt = 0.5 * std::numbers::pi / grid_points;
  const double df = 2.0 * std::numbers::pi / nf;

  std::vector<double> grid(static_cast<std::size_t>(nt * nf));
  auto at = [&](int i, int j) -> double& { return grid[static_cast<std::size_t>(i * nf + j)]; };
  for (int i = 0; i < nt; ++i)
    for (int j = 0; j < nf; ++j) at(i, j) = line.abs_det(i * dt, j * df);

  ProductZeroCount out;
  out.grid_min = *std::min_element(grid.begin(), grid.end());
  out.grid_max = *std::max_element(grid.begin(), grid.end());

  const auto small = std::count_if(grid.begin(), grid.end(), [&](double x) { return x <= opts.zero_tol; });
  if (static_cast<double>(small) > opts.continuum_fraction * static_cast<double>(grid.size())) {
    out.continuum = true;
    return out;
  }

  // Each pole is one point: its neighbors are the whole adjacent ring, and
  // ring points see the pole through column 0.
  const auto is_pole = [&](int i) { return i == 0 || i == nt - 1; };
  const auto local_min = [&](int i, int j) {
    const double c = at(i, j);
    if (is_pole(i)) {
      const int ring = i == 0 ? 1 : nt - 2;
      for (int jj = 0; jj < nf; ++jj)
        if (at(ring, jj) < c) return false;
      return true;
    }
    for (int di = -1; di <= 1; ++di)
      for (int dj = -1; dj <= 1; ++dj) {
        if (!di && !dj) continue;
        const int ii = i + di;
        const int jj = is_pole(ii) ? 0 : (j + dj + nf) % nf;
        if (at(ii, jj) < c) return false;
      }
    return true;
  };

  for (int i = 0; i < nt; ++i) {
    for (int j = 0; j < nf; ++j) {
      if (is_pole(i) && j > 0) continue;
      if (!local_min(i, j)) continue;

      const Vec4 x = refine(line, i * dt, j * df);
      if (!x.allFinite() || std::abs(reshape_to_matrix(x).determinant()) > opts.zero_tol) continue;
      const bool seen = std::any_of(out.zero_vectors.begin(), out.zero_vectors.end(), [&](const Vec4& y) {
        const double overlap = std::min(1.0, std::abs(y.dot(x)));
        return std::acos(overlap) < opts.merge_distance;
      });
      if (!seen) out.zero_vectors.push_back(x);
    }
  }
  out.zeros = static_cast<int>(out.zero_vectors.size());
  return out;
}

}  // namespace qpurify
