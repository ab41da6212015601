// Parallel kernels against their serial references.
//
//   ./build/bench/bench_kernels --benchmark_filter=Transform

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "qre/parallel_kernels.hpp"
#include "qre/reference_kernels.hpp"

namespace {

using qre::kernels::cplx;

std::vector<cplx> random_matrix(std::size_t n) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> d;
  std::vector<cplx> m(n * n);
  for (auto& z : m) z = {d(rng), d(rng)};
  return m;
}

void BM_MultiplyParallel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto a = random_matrix(n), b = random_matrix(n);
  for (auto& z : b) z /= std::abs(z);
  for (auto _ : state) {
    qre::kernels::multiply_pointwise(a, b);
    benchmark::DoNotOptimize(a.data());
  }
}
void BM_MultiplyReference(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto a = random_matrix(n), b = random_matrix(n);
  for (auto& z : b) z /= std::abs(z);
  for (auto _ : state) {
    qre::reference::multiply_pointwise(a, b);
    benchmark::DoNotOptimize(a.data());
  }
}
BENCHMARK(BM_MultiplyParallel)->Arg(256)->Arg(512)->Arg(1024);
BENCHMARK(BM_MultiplyReference)->Arg(256)->Arg(512)->Arg(1024);

void BM_TransposeParallel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto a = random_matrix(n);
  for (auto _ : state) {
    qre::kernels::transpose_square(a, n);
    benchmark::DoNotOptimize(a.data());
  }
}
void BM_TransposeReference(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto a = random_matrix(n);
  for (auto _ : state) {
    qre::reference::transpose_square(a, n);
    benchmark::DoNotOptimize(a.data());
  }
}
BENCHMARK(BM_TransposeParallel)->Arg(256)->Arg(512)->Arg(1024);
BENCHMARK(BM_TransposeReference)->Arg(256)->Arg(512)->Arg(1024);

void BM_TransformParallel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto a = random_matrix(n);
  for (auto _ : state) {
    qre::kernels::two_sided_transform(a, n, qre::kernels::TwoSided::to_momentum, 1.0 / n);
    benchmark::DoNotOptimize(a.data());
  }
}
void BM_TransformReference(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto a = random_matrix(n);
  for (auto _ : state) {
    qre::reference::two_sided_transform(a, n, qre::kernels::TwoSided::to_momentum, 1.0 / n);
    benchmark::DoNotOptimize(a.data());
  }
}
BENCHMARK(BM_TransformParallel)->Arg(32)->Arg(64)->Arg(256)->Arg(512)->Arg(1024);
BENCHMARK(BM_TransformReference)->Arg(32)->Arg(64);

void pair_kernel_inputs(std::size_t n, std::vector<double>& e, std::vector<double>& mag,
                        std::vector<double>& ph) {
  e.resize(n);
  mag.assign(2 * n, 3.0);
  ph.resize(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    e[i] = 1e-2 * std::exp(-0.01 * double(i));
    ph[i] = 1e-3 * double(i);
    ph[n + i] = -1e-3 * double(i);
  }
}

void BM_PairKernelParallel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> e, mag, ph;
  pair_kernel_inputs(n, e, mag, ph);
  std::vector<cplx> out(n * n);
  for (auto _ : state) benchmark::DoNotOptimize(qre::kernels::build_pair_kernel(out, e, mag, ph, n, 0.5));
}
void BM_PairKernelReference(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> e, mag, ph;
  pair_kernel_inputs(n, e, mag, ph);
  std::vector<cplx> out(n * n);
  for (auto _ : state) benchmark::DoNotOptimize(qre::reference::build_pair_kernel(out, e, mag, ph, n, 0.5));
}
BENCHMARK(BM_PairKernelParallel)->Arg(256)->Arg(512);
BENCHMARK(BM_PairKernelReference)->Arg(256)->Arg(512);

}  // namespace

BENCHMARK_MAIN();
