#pragma once

// Straight serial versions of the routines in parallel_kernels.hpp. The
// transforms use the explicit O(n^3) DFT matrix product rather than an FFT so
// that tests compare two independent routes.

#include "qre/parallel_kernels.hpp"

namespace qre::reference {

using kernels::cplx;
using kernels::Sign;
using kernels::TwoSided;

void multiply_pointwise(std::span<cplx> data, std::span<const cplx> factor);
void transpose_square(std::span<cplx> data, std::size_t n);
void transform_rows(std::span<cplx> data, std::size_t n, Sign sign);
void two_sided_transform(std::span<cplx> data, std::size_t n, TwoSided dir,
                         double scale);
double build_pair_kernel(std::span<cplx> out, std::span<const double> energies,
                         std::span<const double> magnitudes,
                         std::span<const double> phases, std::size_t n,
                         double dt);
double sum_abs2(std::span<const cplx> data);

}  // namespace qre::reference
