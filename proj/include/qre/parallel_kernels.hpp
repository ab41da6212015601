#pragma once

// Data-parallel inner loops of the propagator. Every routine here has a serial
// counterpart in qre::reference (reference_kernels.hpp) that is kept for tests
// and for the benchmark comparison.

#include <complex>
#include <cstddef>
#include <span>

namespace qre::kernels {

using cplx = std::complex<double>;

// data[k] *= factor[k]
void multiply_pointwise(std::span<cplx> data, std::span<const cplx> factor);

// In-place transpose of an n x n row-major matrix.
void transpose_square(std::span<cplx> data, std::size_t n);

enum class Sign { forward = -1, backward = +1 };

// Unnormalized DFT of every row: row_k <- sum_j row_j exp(sign * 2 pi i jk/n).
void transform_rows(std::span<cplx> data, std::size_t n, Sign sign);

// M <- scale * F M F^dagger with F_jk = exp(-2 pi i jk/n) (to_momentum), or
// M <- scale * F^dagger M F (to_position).
enum class TwoSided { to_momentum, to_position };
void two_sided_transform(std::span<cplx> data, std::size_t n, TwoSided dir,
                         double scale);

// Kernel exponent assembly: out(i,j) = exp(dt * (phase_term(i,j) + decay)),
// where the generator for a pair of diagonal operators is
//   -i (h_i - h_j) + sum_k [ r_ki r_kj (exp(i(t_ki - t_kj)) - 1) - (r_ki - r_kj)^2 / 2 ].
// `magnitudes` and `phases` are op-major (op k occupies [k*n, (k+1)*n)).
// Returns the largest |Im(exponent)| * dt over all pairs.
double build_pair_kernel(std::span<cplx> out, std::span<const double> energies,
                         std::span<const double> magnitudes,
                         std::span<const double> phases, std::size_t n,
                         double dt);

// Weighted sum of squared moduli: sum |data_k|^2.
double sum_abs2(std::span<const cplx> data);

}  // namespace qre::kernels
