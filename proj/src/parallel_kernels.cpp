#include "qre/parallel_kernels.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <omp.h>
#include <tuple>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace qre::kernels {

namespace {

// FFTW planning is not thread-safe; execution with the new-array interface
// is. One batched plan per (length, sign, axis) is created on first use and
// kept for the process lifetime. FFTW_ESTIMATE keeps the chosen algorithm,
// and therefore the rounding, identical from run to run. FFTW's OpenMP
// backend parallelizes each batch over the available threads.
enum class Axis { rows, columns };

class PlanCache {
 public:
  fftw_plan get(std::size_t n, Sign sign, Axis axis) {
    std::lock_guard lock(mutex_);
    if (!threads_ready_) {
      fftw_init_threads();
      threads_ready_ = true;
    }
    const auto key = std::make_tuple(n, static_cast<int>(sign), static_cast<int>(axis));
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::vector<cplx> scratch(n * n);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    const int len = static_cast<int>(n);
    const int stride = axis == Axis::rows ? 1 : len;
    const int dist = axis == Axis::rows ? len : 1;
    fftw_plan_with_nthreads(omp_get_max_threads());
    fftw_plan plan = fftw_plan_many_dft(1, &len, len, buf, nullptr, stride, dist, buf, nullptr,
                                        stride, dist,
                                        sign == Sign::forward ? FFTW_FORWARD : FFTW_BACKWARD,
                                        FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan == nullptr) throw std::runtime_error("fftw: planning failed");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  bool threads_ready_ = false;
  std::map<std::tuple<std::size_t, int, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

void execute(std::span<cplx> data, std::size_t n, Sign sign, Axis axis) {
  if (data.size() != n * n) throw std::invalid_argument("fft: not n x n");
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan_cache().get(n, sign, axis), buf, buf);
}

constexpr std::size_t kBlock = 32;

}  // namespace

void multiply_pointwise(std::span<cplx> data, std::span<const cplx> factor) {
  if (data.size() != factor.size())
    throw std::invalid_argument("multiply_pointwise: size mismatch");
  const auto n = static_cast<std::ptrdiff_t>(data.size());
  // Plain real arithmetic: std::complex operator* goes through the
  // NaN-recovering libgcc path, which dominates the step time.
  double* d = reinterpret_cast<double*>(data.data());
  const double* f = reinterpret_cast<const double*>(factor.data());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    const double a = d[2 * k], b = d[2 * k + 1];
    const double c = f[2 * k], e = f[2 * k + 1];
    d[2 * k] = a * c - b * e;
    d[2 * k + 1] = a * e + b * c;
  }
}

void transpose_square(std::span<cplx> data, std::size_t n) {
  if (data.size() != n * n)
    throw std::invalid_argument("transpose_square: not n x n");
  const auto nb = static_cast<std::ptrdiff_t>((n + kBlock - 1) / kBlock);
  cplx* a = data.data();
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t bi = 0; bi < nb; ++bi) {
    for (std::ptrdiff_t bj = bi; bj < nb; ++bj) {
      const std::size_t i0 = bi * kBlock, j0 = bj * kBlock;
      const std::size_t i1 = std::min(n, i0 + kBlock);
      const std::size_t j1 = std::min(n, j0 + kBlock);
      for (std::size_t i = i0; i < i1; ++i) {
        const std::size_t jstart = (bi == bj) ? i + 1 : j0;
        for (std::size_t j = jstart; j < j1; ++j)
          std::swap(a[i * n + j], a[j * n + i]);
      }
    }
  }
}

void transform_rows(std::span<cplx> data, std::size_t n, Sign sign) {
  execute(data, n, sign, Axis::rows);
}

void two_sided_transform(std::span<cplx> data, std::size_t n, TwoSided dir,
                         double scale) {
  // to_momentum: F M F^dag, i.e. backward along rows (right index) and
  // forward along columns (left index).
  const Sign right = dir == TwoSided::to_momentum ? Sign::backward : Sign::forward;
  const Sign left = dir == TwoSided::to_momentum ? Sign::forward : Sign::backward;
  execute(data, n, right, Axis::rows);
  execute(data, n, left, Axis::columns);
  if (scale != 1.0) {
    const auto total = static_cast<std::ptrdiff_t>(2 * data.size());
    double* d = reinterpret_cast<double*>(data.data());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < total; ++k) d[k] *= scale;
  }
}

double build_pair_kernel(std::span<cplx> out, std::span<const double> energies,
                         std::span<const double> magnitudes,
                         std::span<const double> phases, std::size_t n,
                         double dt) {
  if (out.size() != n * n || energies.size() != n ||
      magnitudes.size() != phases.size() || magnitudes.size() % n != 0)
    throw std::invalid_argument("build_pair_kernel: shape mismatch");
  const std::size_t n_ops = magnitudes.size() / n;
  const auto rows = static_cast<std::ptrdiff_t>(n);
  double max_phase = 0.0;
#pragma omp parallel for schedule(static) reduction(max : max_phase)
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double re = 0.0;
      double im = -(energies[i] - energies[j]);
      for (std::size_t k = 0; k < n_ops; ++k) {
        const double ri = magnitudes[k * n + i], rj = magnitudes[k * n + j];
        const double dtheta = phases[k * n + i] - phases[k * n + j];
        const double s = std::sin(0.5 * dtheta);
        const double rr = ri * rj;
        re += -2.0 * rr * s * s - 0.5 * (ri - rj) * (ri - rj);
        im += rr * std::sin(dtheta);
      }
      max_phase = std::max(max_phase, std::abs(im) * dt);
      out[i * n + j] = std::exp(cplx(re * dt, im * dt));
    }
  }
  return max_phase;
}

double sum_abs2(std::span<const cplx> data) {
  const auto n = static_cast<std::ptrdiff_t>(data.size());
  const cplx* d = data.data();
  double acc = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : acc)
  for (std::ptrdiff_t k = 0; k < n; ++k) acc += std::norm(d[k]);
  return acc;
}

}  // namespace qre::kernels
