#include "qre/reference_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace qre::reference {

void multiply_pointwise(std::span<cplx> data, std::span<const cplx> factor) {
  if (data.size() != factor.size())
    throw std::invalid_argument("multiply_pointwise: size mismatch");
  for (std::size_t k = 0; k < data.size(); ++k) data[k] *= factor[k];
}

void transpose_square(std::span<cplx> data, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) std::swap(data[i * n + j], data[j * n + i]);
}

namespace {

std::vector<cplx> dft_matrix(std::size_t n, Sign sign) {
  std::vector<cplx> w(n * n);
  const double s = static_cast<double>(static_cast<int>(sign));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) {
      // reduce jk mod n before scaling to keep the angle small
      const double angle = s * 2.0 * std::numbers::pi *
                           static_cast<double>((j * k) % n) / static_cast<double>(n);
      w[j * n + k] = std::polar(1.0, angle);
    }
  return w;
}

}  // namespace

void transform_rows(std::span<cplx> data, std::size_t n, Sign sign) {
  const auto w = dft_matrix(n, sign);
  std::vector<cplx> row(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t k = 0; k < n; ++k) {
      cplx acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc += data[r * n + j] * w[j * n + k];
      row[k] = acc;
    }
    std::copy(row.begin(), row.end(), data.begin() + static_cast<std::ptrdiff_t>(r * n));
  }
}

void two_sided_transform(std::span<cplx> data, std::size_t n, TwoSided dir,
                         double scale) {
  // Explicit product L * M * R with the dense DFT matrices.
  const bool to_mom = dir == TwoSided::to_momentum;
  const auto left = dft_matrix(n, to_mom ? Sign::forward : Sign::backward);
  const auto right = dft_matrix(n, to_mom ? Sign::backward : Sign::forward);
  std::vector<cplx> tmp(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const cplx a = left[i * n + k];
      for (std::size_t j = 0; j < n; ++j) tmp[i * n + j] += a * data[k * n + j];
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      cplx acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) acc += tmp[i * n + k] * right[k * n + j];
      data[i * n + j] = scale * acc;
    }
}

double build_pair_kernel(std::span<cplx> out, std::span<const double> energies,
                         std::span<const double> magnitudes,
                         std::span<const double> phases, std::size_t n,
                         double dt) {
  // Direct A_i conj(A_j) - |A_i|^2/2 - |A_j|^2/2 form.
  const std::size_t n_ops = magnitudes.size() / n;
  double max_phase = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      cplx e(0.0, -(energies[i] - energies[j]));
      for (std::size_t k = 0; k < n_ops; ++k) {
        const cplx ai = std::polar(magnitudes[k * n + i], phases[k * n + i]);
        const cplx aj = std::polar(magnitudes[k * n + j], phases[k * n + j]);
        e += ai * std::conj(aj) - 0.5 * std::norm(ai) - 0.5 * std::norm(aj);
      }
      max_phase = std::max(max_phase, std::abs(e.imag()) * dt);
      out[i * n + j] = std::exp(e * dt);
    }
  return max_phase;
}

double sum_abs2(std::span<const cplx> data) {
  double acc = 0.0;
  for (const auto& z : data) acc += std::norm(z);
  return acc;
}

}  // namespace qre::reference
