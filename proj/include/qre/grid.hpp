#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace qre {

using cplx = std::complex<double>;

enum class Representation { position, momentum };

// Periodic position grid and its Fourier-conjugate momentum grid.
//
// Positions are x_i = x_min + i*dx for i in [0, n). Momenta follow the usual
// FFT ordering: p_j = j*dp for j < n/2 and (j - n)*dp otherwise, so the single
// Nyquist sample sits at -n/2*dp.
class PhaseGrid {
 public:
  PhaseGrid(std::size_t n_points, double x_min, double x_max);

  std::size_t size() const { return n_; }
  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  double dx() const { return dx_; }
  double dp() const { return dp_; }

  std::span<const double> x() const { return x_; }
  std::span<const double> p() const { return p_; }

  // Samples along the requested axis (x for position, p for momentum).
  std::span<const double> axis(Representation rep) const {
    return rep == Representation::position ? x() : p();
  }
  double spacing(Representation rep) const {
    return rep == Representation::position ? dx_ : dp_;
  }

  // Index order that visits momentum samples from most negative to most
  // positive. For the position axis this is the identity.
  std::vector<std::size_t> ascending_order(Representation rep) const;

 private:
  std::size_t n_;
  double x_min_, x_max_, dx_, dp_;
  std::vector<double> x_, p_;
};

using GridPtr = std::shared_ptr<const PhaseGrid>;

// Throws std::invalid_argument for non-power-of-two sizes, n < 8, or an empty
// box.
GridPtr build_grid(std::size_t n_points, double x_min, double x_max);

// Complex n x n matrix, row-major, element (i, j) ~ rho(xi_i, xi_j) in the
// tagged representation.
class DensityMatrix {
 public:
  DensityMatrix(GridPtr grid, Representation rep);
  DensityMatrix(GridPtr grid, Representation rep, std::vector<cplx> elements);

  const PhaseGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  Representation representation() const { return rep_; }
  std::size_t size() const { return grid_->size(); }

  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * size() + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const {
    return data_[i * size() + j];
  }

  std::span<cplx> data() { return data_; }
  std::span<const cplx> data() const { return data_; }

  // Integration weight of the tagged representation (dx or dp).
  double weight() const { return grid_->spacing(rep_); }

  // Real diagonal density rho(xi_i, xi_i).
  std::vector<double> diagonal() const;

  double trace() const;
  double purity() const;
  // max |rho_ij - conj(rho_ji)| / max |rho_ij|
  double hermiticity_defect() const;
  // Smallest eigenvalue of the hermitian part, in units of the weighted
  // operator (so a pure normalized state has largest eigenvalue 1).
  double min_eigenvalue() const;

 private:
  GridPtr grid_;
  Representation rep_;
  std::vector<cplx> data_;
};

struct GaussianSpec {
  double x0 = 0.0;
  double p0_mean = 0.0;
  double sigma_x = 1.0;
};

// Pure state |psi><psi| of a normalized Gaussian packet. Throws
// std::invalid_argument for sigma_x <= 0 or mass <= 0, and std::domain_error
// when more than 1e-8 of the probability lies outside the central 80% of the
// box.
DensityMatrix gaussian_density(const GridPtr& grid, const GaussianSpec& spec,
                               double mass);

// rho = 1 / (n dx) on the diagonal.
DensityMatrix maximally_mixed(const GridPtr& grid);

// Two-sided discrete Fourier transform: forward on the left index, inverse on
// the right index, scaled so that trace and purity are preserved.
DensityMatrix to_momentum_rep(const DensityMatrix& rho);
DensityMatrix to_position_rep(const DensityMatrix& rho);

// Weighted Hilbert-Schmidt distance between two states in the same
// representation.
double hs_distance(const DensityMatrix& a, const DensityMatrix& b);

}  // namespace qre
