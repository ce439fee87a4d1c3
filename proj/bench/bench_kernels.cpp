// Serial reference vs OpenMP path for the data-parallel kernels.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "triqi/kernels.hpp"
#include "triqi/secular.hpp"

namespace {

using namespace triqi;
using kernels::Exec;

Matrix random_matrix(Eigen::Index n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = Complex(g(rng), g(rng));
  }
  return m;
}

Exec exec_of(const benchmark::State& state) { return state.range(1) == 0 ? Exec::serial : Exec::parallel; }

void BM_TraceProduct(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  const Matrix a = random_matrix(n, 1);
  const Matrix b = random_matrix(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::trace_product(a, b, exec_of(state)));
}
BENCHMARK(BM_TraceProduct)->ArgsProduct({{256, 1024}, {0, 1}});

void BM_Bilinear(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  const RealVector a = RealVector::Random(n);
  const RealVector b = RealVector::Random(n);
  const Eigen::MatrixXd w = Eigen::MatrixXd::Random(n, n);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::bilinear(a, w, b, exec_of(state)));
}
BENCHMARK(BM_Bilinear)->ArgsProduct({{512, 2048}, {0, 1}});

void BM_ApplyMode(benchmark::State& state) {
  const std::size_t c = static_cast<std::size_t>(state.range(0));
  const SpaceDescriptor space({2, c, c});
  const auto n = static_cast<Eigen::Index>(space.total_dim());
  const Matrix u = random_matrix(static_cast<Eigen::Index>(c), 3);
  Matrix block = random_matrix(n, 4).leftCols(8);
  for (auto _ : state) {
    kernels::apply_mode(block, space, 1, u, exec_of(state));
    benchmark::DoNotOptimize(block.data());
  }
}
BENCHMARK(BM_ApplyMode)->ArgsProduct({{16, 32}, {0, 1}});

void BM_PartialTrace(benchmark::State& state) {
  const std::size_t c = static_cast<std::size_t>(state.range(0));
  const SpaceDescriptor space({2, c, c});
  const Matrix rho = random_matrix(static_cast<Eigen::Index>(space.total_dim()), 5);
  const std::size_t keep[] = {1, 2};
  for (auto _ : state) benchmark::DoNotOptimize(kernels::partial_trace(rho, space, keep, exec_of(state)));
}
BENCHMARK(BM_PartialTrace)->ArgsProduct({{8, 16}, {0, 1}});

void BM_SecularRoots(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  RealVector d(n);
  RealVector z2(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    d(i) = static_cast<double>(i) / static_cast<double>(n);
    z2(i) = 1.0 / static_cast<double>(n);
  }
  std::vector<kernels::SecularRootValue> out(static_cast<std::size_t>(n));
  for (auto _ : state) {
    kernels::secular_roots(d, z2, 0.5, out, 2000, exec_of(state));
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_SecularRoots)->ArgsProduct({{256, 4096}, {0, 1}});

}  // namespace

BENCHMARK_MAIN();
