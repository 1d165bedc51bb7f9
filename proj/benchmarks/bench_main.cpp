#include <benchmark/benchmark.h>

#include <cmath>
#include <complex>

#include "qpurify/oracle.hpp"
#include "qpurify/protocol.hpp"

using namespace qpurify;

namespace {

Mat2 rotation(double t, double phase) {
  Mat2 u;
  u << std::cos(t), -std::polar(std::sin(t), -phase), std::polar(std::sin(t), phase), std::cos(t);
  return u;
}

DensityMatrix2Q w_state(double p, double a, double b, double g, double t) {
  return reconstruct(WCanonicalForm(p, a, b, g, rotation(t, 0.3), rotation(0.5 * t, 1.1)));
}

const DensityMatrix2Q& rho() {
  static const auto s = w_state(0.5, 0.6, 0.8, 0.0, 0.4);
  return s;
}

const DensityMatrix2Q& sigma() {
  static const auto s = w_state(0.3, 0.5, 0.7, std::sqrt(1 - 0.25 - 0.49), 1.2);
  return s;
}

void BM_ValidateDensity(benchmark::State& state) {
  const Mat4 m = rho().matrix();
  for (auto _ : state) benchmark::DoNotOptimize(validate_density(m));
}
BENCHMARK(BM_ValidateDensity);

void BM_HermitianEig16(benchmark::State& state) {
  const MatX j = joint_state(rho(), sigma());
  for (auto _ : state) benchmark::DoNotOptimize(hermitian_eig(j));
}
BENCHMARK(BM_HermitianEig16);

void BM_ClassifyRange(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(classify_range(rho()));
}
BENCHMARK(BM_ClassifyRange);

void BM_Canonicalize(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(w_canonicalize(sigma()));
}
BENCHMARK(BM_Canonicalize);

void BM_PurifyPair(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(purify_pair(rho(), sigma()));
}
BENCHMARK(BM_PurifyPair);

void BM_SampleProductZeros(benchmark::State& state) {
  const Subspace sub = range_basis(rho());
  const int grid = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sample_product_zeros(sub, grid));
}
BENCHMARK(BM_SampleProductZeros)->Arg(24)->Arg(48)->Arg(96);

void BM_SearchSmallBudget(benchmark::State& state) {
  SearchConfig cfg;
  cfg.restarts = 4;
  cfg.iterations_per_restart = static_cast<int>(state.range(0));
  cfg.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(search_best_protocol(rho(), sigma(), cfg));
}
BENCHMARK(BM_SearchSmallBudget)->Arg(200)->Arg(2000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
