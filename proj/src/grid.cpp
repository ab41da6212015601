#include "qre/grid.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>
#include <string>

#include "qre/parallel_kernels.hpp"
#include "qre/units.hpp"

namespace qre {

PhaseGrid::PhaseGrid(std::size_t n_points, double x_min, double x_max)
    : n_(n_points), x_min_(x_min), x_max_(x_max) {
  if (n_points < 8 || !std::has_single_bit(n_points))
    throw std::invalid_argument("grid size must be a power of two >= 8, got " +
                                std::to_string(n_points));
  if (!(x_max > x_min))
    throw std::invalid_argument("grid box length must be positive");
  dx_ = (x_max - x_min) / static_cast<double>(n_);
  dp_ = 2.0 * units::pi * units::hbar / (static_cast<double>(n_) * dx_);
  x_.resize(n_);
  p_.resize(n_);
  const auto half = static_cast<std::ptrdiff_t>(n_ / 2);
  for (std::size_t i = 0; i < n_; ++i) {
    x_[i] = x_min_ + static_cast<double>(i) * dx_;
    const auto j = static_cast<std::ptrdiff_t>(i);
    p_[i] = static_cast<double>(j < half ? j : j - static_cast<std::ptrdiff_t>(n_)) * dp_;
  }
}

std::vector<std::size_t> PhaseGrid::ascending_order(Representation rep) const {
  std::vector<std::size_t> order(n_);
  if (rep == Representation::position) {
    std::iota(order.begin(), order.end(), std::size_t{0});
  } else {
    // FFT ordering: negative half first, starting at the Nyquist sample
    for (std::size_t k = 0; k < n_; ++k) order[k] = (k + n_ / 2) % n_;
  }
  return order;
}

GridPtr build_grid(std::size_t n_points, double x_min, double x_max) {
  return std::make_shared<const PhaseGrid>(n_points, x_min, x_max);
}

DensityMatrix::DensityMatrix(GridPtr grid, Representation rep)
    : grid_(std::move(grid)), rep_(rep), data_(grid_->size() * grid_->size()) {}

DensityMatrix::DensityMatrix(GridPtr grid, Representation rep,
                             std::vector<cplx> elements)
    : grid_(std::move(grid)), rep_(rep), data_(std::move(elements)) {
  if (data_.size() != grid_->size() * grid_->size())
    throw std::invalid_argument("density matrix: element count does not match grid");
}

std::vector<double> DensityMatrix::diagonal() const {
  std::vector<double> d(size());
  for (std::size_t i = 0; i < size(); ++i) d[i] = (*this)(i, i).real();
  return d;
}

double DensityMatrix::trace() const {
  double acc = 0.0;
  for (std::size_t i = 0; i < size(); ++i) acc += (*this)(i, i).real();
  return acc * weight();
}

double DensityMatrix::purity() const {
  return kernels::sum_abs2(data_) * weight() * weight();
}

double DensityMatrix::hermiticity_defect() const {
  double defect = 0.0, scale = 0.0;
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      defect = std::max(defect, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
      scale = std::max(scale, std::abs((*this)(i, j)));
      scale = std::max(scale, std::abs((*this)(j, i)));
    }
  return scale > 0.0 ? defect / scale : 0.0;
}

double DensityMatrix::min_eigenvalue() const {
  const auto n = static_cast<Eigen::Index>(size());
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      m(i, j) = 0.5 * ((*this)(i, j) + std::conj((*this)(j, i))) * weight();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

DensityMatrix gaussian_density(const GridPtr& grid, const GaussianSpec& spec,
                               double mass) {
  if (!(spec.sigma_x > 0.0)) throw std::invalid_argument("sigma_x must be positive");
  if (!(mass > 0.0)) throw std::invalid_argument("mass must be positive");
  const std::size_t n = grid->size();
  const auto x = grid->x();
  std::vector<cplx> psi(n);
  const double s2 = spec.sigma_x * spec.sigma_x;
  double norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - spec.x0;
    psi[i] = std::polar(std::exp(-d * d / (4.0 * s2)), spec.p0_mean * x[i] / units::hbar);
    norm += std::norm(psi[i]);
  }
  norm *= grid->dx();
  const double scale = 1.0 / std::sqrt(norm);
  for (auto& v : psi) v *= scale;

  // mass outside the central 80% of the box
  const double lo = grid->x_min() + 0.1 * (grid->x_max() - grid->x_min());
  const double hi = grid->x_max() - 0.1 * (grid->x_max() - grid->x_min());
  double outside = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    if (x[i] < lo || x[i] > hi) outside += std::norm(psi[i]) * grid->dx();
  if (outside > 1e-8)
  {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", outside);
    throw std::domain_error(std::string("gaussian packet leaks outside the box (outer mass ") +
                            buf + ")");
  }

  DensityMatrix rho(grid, Representation::position);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) rho(i, j) = psi[i] * std::conj(psi[j]);
  return rho;
}

DensityMatrix maximally_mixed(const GridPtr& grid) {
  DensityMatrix rho(grid, Representation::position);
  const double v = 1.0 / (static_cast<double>(grid->size()) * grid->dx());
  for (std::size_t i = 0; i < grid->size(); ++i) rho(i, i) = v;
  return rho;
}

namespace {

double momentum_scale(const PhaseGrid& g) {
  return g.dx() / (g.dp() * static_cast<double>(g.size()));
}

}  // namespace

DensityMatrix to_momentum_rep(const DensityMatrix& rho) {
  if (rho.representation() != Representation::momentum) {
    DensityMatrix tagged(rho.grid_ptr(), Representation::momentum,
                         std::vector<cplx>(rho.data().begin(), rho.data().end()));
    kernels::two_sided_transform(tagged.data(), rho.size(),
                                 kernels::TwoSided::to_momentum,
                                 momentum_scale(rho.grid()));
    return tagged;
  }
  throw std::invalid_argument("to_momentum_rep: state already in momentum representation");
}

DensityMatrix to_position_rep(const DensityMatrix& rho) {
  if (rho.representation() != Representation::position) {
    DensityMatrix tagged(rho.grid_ptr(), Representation::position,
                         std::vector<cplx>(rho.data().begin(), rho.data().end()));
    kernels::two_sided_transform(tagged.data(), rho.size(),
                                 kernels::TwoSided::to_position,
                                 1.0 / (momentum_scale(rho.grid()) *
                                        static_cast<double>(rho.size()) *
                                        static_cast<double>(rho.size())));
    return tagged;
  }
  throw std::invalid_argument("to_position_rep: state already in position representation");
}

double hs_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.representation() != b.representation() || a.size() != b.size())
    throw std::invalid_argument("hs_distance: incompatible states");
  double acc = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k) acc += std::norm(a.data()[k] - b.data()[k]);
  return std::sqrt(acc) * a.weight();
}

}  // namespace qre
