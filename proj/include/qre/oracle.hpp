#pragma once

// Brute-force and closed-form references for validating the split-operator
// propagator. Nothing here shares code with the kernel path: the dense
// generator is assembled from full operator matrices and integrated with RK4.

#include <Eigen/Dense>

#include <span>
#include <string>
#include <vector>

#include "qre/grid.hpp"
#include "qre/synthesis.hpp"

namespace qre::oracle {

inline constexpr std::size_t kMaxDenseGrid = 64;

// Full n x n matrix of an operator diagonal in the given representation,
// expressed in the position basis.
Eigen::MatrixXcd operator_matrix(std::span<const cplx> diagonal, Representation rep,
                                 const PhaseGrid& grid);
Eigen::MatrixXcd operator_matrix(const LindbladOp& op, const PhaseGrid& grid);

// T(p) + U(x) with a spectral kinetic term, the same discretization the
// propagator uses.
Eigen::MatrixXcd hamiltonian_matrix(std::span<const double> potential,
                                    std::span<const double> kinetic, const PhaseGrid& grid);

// Right-hand side of the master equation as an n^2 x n^2 matrix acting on the
// row-major vectorized density matrix.
class DenseLiouvillian {
 public:
  explicit DenseLiouvillian(Eigen::MatrixXcd superoperator)
      : matrix_(std::move(superoperator)) {}

  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  std::size_t grid_size() const {
    return static_cast<std::size_t>(std::llround(std::sqrt(double(matrix_.rows()))));
  }

  DensityMatrix apply(const DensityMatrix& rho) const;

  // Upper bound on the spectral norm, sqrt(||L||_1 ||L||_inf).
  double norm_bound() const;

 private:
  Eigen::MatrixXcd matrix_;
};

// Throws std::invalid_argument when n exceeds kMaxDenseGrid.
DenseLiouvillian build_dense_liouvillian(const Eigen::MatrixXcd& hamiltonian,
                                         const std::vector<Eigen::MatrixXcd>& ops,
                                         const PhaseGrid& grid);

// Classical fourth-order Runge-Kutta on d rho/dt = L rho. Throws
// std::invalid_argument unless norm_bound() * dt < 0.1.
DensityMatrix rk4_evolve(const DenseLiouvillian& L, const DensityMatrix& rho0, double dt,
                         long n_steps);

// Smallest number of equal RK4 substeps that satisfies the step-size guard
// for an interval of length `interval`.
long rk4_substeps(const DenseLiouvillian& L, double interval);

enum class ComparatorKind { free_gaussian_spread, linear_potential_newton, classical_relativistic };

ComparatorKind parse_comparator_kind(const std::string& name);  // throws on unknown

struct ComparatorParams {
  double mass = 1.0;
  double sigma_x = 1.0;
  double x0 = 0.0;
  double p0 = 0.0;
  double force = 0.0;  // constant force -dU/dx
  double light_speed = 0.0;
};

struct ComparatorSeries {
  std::vector<double> t;
  // free_gaussian_spread: var_x; linear_potential_newton: <x>;
  // classical_relativistic: velocity.
  std::vector<double> value;
  // classical_relativistic: momentum; linear_potential_newton: <p>; else empty.
  std::vector<double> secondary;
};

ComparatorSeries analytic_comparators(ComparatorKind kind, const ComparatorParams& params,
                                      std::span<const double> times);

}  // namespace qre::oracle
