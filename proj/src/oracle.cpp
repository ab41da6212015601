#include "qre/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "qre/units.hpp"

namespace qre::oracle {

namespace {

// Unitary DFT matrix U_jk = exp(-2 pi i jk/n) / sqrt(n); momentum-basis
// amplitudes are U applied to position-basis amplitudes.
Eigen::MatrixXcd unitary_dft(std::size_t n) {
  const auto nn = static_cast<Eigen::Index>(n);
  Eigen::MatrixXcd u(nn, nn);
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  for (Eigen::Index j = 0; j < nn; ++j)
    for (Eigen::Index k = 0; k < nn; ++k) {
      const double angle = -2.0 * units::pi * static_cast<double>((j * k) % nn) /
                           static_cast<double>(n);
      u(j, k) = std::polar(norm, angle);
    }
  return u;
}

}  // namespace

Eigen::MatrixXcd operator_matrix(std::span<const cplx> diagonal, Representation rep,
                                 const PhaseGrid& grid) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  if (static_cast<Eigen::Index>(diagonal.size()) != n)
    throw std::invalid_argument("operator_matrix: sample count mismatch");
  Eigen::VectorXcd d(n);
  for (Eigen::Index i = 0; i < n; ++i) d(i) = diagonal[static_cast<std::size_t>(i)];
  if (rep == Representation::position) return d.asDiagonal();
  const auto u = unitary_dft(grid.size());
  return u.adjoint() * d.asDiagonal() * u;
}

Eigen::MatrixXcd operator_matrix(const LindbladOp& op, const PhaseGrid& grid) {
  const auto v = op.values();
  return operator_matrix(v, op.representation(), grid);
}

Eigen::MatrixXcd hamiltonian_matrix(std::span<const double> potential,
                                    std::span<const double> kinetic, const PhaseGrid& grid) {
  std::vector<cplx> t(kinetic.begin(), kinetic.end());
  std::vector<cplx> u(potential.begin(), potential.end());
  return operator_matrix(t, Representation::momentum, grid) +
         operator_matrix(u, Representation::position, grid);
}

namespace {

// Row-major vectorization: vec(rho)[i*n + j] = rho(i, j).
//   vec(A rho)  = (A kron I) vec(rho)
//   vec(rho B)  = (I kron B^T) vec(rho)
Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace

DenseLiouvillian build_dense_liouvillian(const Eigen::MatrixXcd& h,
                                         const std::vector<Eigen::MatrixXcd>& ops,
                                         const PhaseGrid& grid) {
  const std::size_t n = grid.size();
  if (n > kMaxDenseGrid)
    throw std::invalid_argument("dense Liouvillian limited to n <= 64, got " + std::to_string(n));
  const auto nn = static_cast<Eigen::Index>(n);
  if (h.rows() != nn || h.cols() != nn)
    throw std::invalid_argument("dense Liouvillian: Hamiltonian shape mismatch");
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(nn, nn);
  const cplx minus_i_over_hbar(0.0, -1.0 / units::hbar);
  Eigen::MatrixXcd l = minus_i_over_hbar * (kron(h, id) - kron(id, h.transpose()));
  for (const auto& a : ops) {
    if (a.rows() != nn || a.cols() != nn)
      throw std::invalid_argument("dense Liouvillian: operator shape mismatch");
    const Eigen::MatrixXcd ada = a.adjoint() * a;
    l += (kron(a, a.conjugate()) - 0.5 * kron(ada, id) - 0.5 * kron(id, ada.transpose())) /
         units::hbar;
  }
  return DenseLiouvillian(std::move(l));
}

DensityMatrix DenseLiouvillian::apply(const DensityMatrix& rho) const {
  const auto v = Eigen::Map<const Eigen::VectorXcd>(rho.data().data(),
                                                    static_cast<Eigen::Index>(rho.data().size()));
  Eigen::VectorXcd out = matrix_ * v;
  return DensityMatrix(rho.grid_ptr(), rho.representation(),
                       std::vector<cplx>(out.data(), out.data() + out.size()));
}

double DenseLiouvillian::norm_bound() const {
  const double one = matrix_.cwiseAbs().colwise().sum().maxCoeff();
  const double inf = matrix_.cwiseAbs().rowwise().sum().maxCoeff();
  return std::sqrt(one * inf);
}

DensityMatrix rk4_evolve(const DenseLiouvillian& l, const DensityMatrix& rho0, double dt,
                         long n_steps) {
  if (rho0.representation() != Representation::position)
    throw std::invalid_argument("rk4_evolve: state must be in the position representation");
  const auto& m = l.matrix();
  if (m.rows() != static_cast<Eigen::Index>(rho0.data().size()))
    throw std::invalid_argument("rk4_evolve: state and generator sizes differ");
  if (!(l.norm_bound() * dt < 0.1))
    throw std::invalid_argument("rk4_evolve: ||L|| dt = " + std::to_string(l.norm_bound() * dt) +
                                " is not below 0.1");
  Eigen::VectorXcd y = Eigen::Map<const Eigen::VectorXcd>(rho0.data().data(), m.rows());
  Eigen::VectorXcd k1(m.rows()), k2(m.rows()), k3(m.rows()), k4(m.rows());
  for (long s = 0; s < n_steps; ++s) {
    k1.noalias() = m * y;
    k2.noalias() = m * (y + 0.5 * dt * k1);
    k3.noalias() = m * (y + 0.5 * dt * k2);
    k4.noalias() = m * (y + dt * k3);
    y += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return DensityMatrix(rho0.grid_ptr(), Representation::position,
                       std::vector<cplx>(y.data(), y.data() + y.size()));
}

long rk4_substeps(const DenseLiouvillian& l, double interval) {
  const double bound = l.norm_bound();
  auto k = static_cast<long>(std::ceil(bound * interval / 0.09));
  return k < 1 ? 1 : k;
}

ComparatorKind parse_comparator_kind(const std::string& name) {
  if (name == "free_gaussian_spread") return ComparatorKind::free_gaussian_spread;
  if (name == "linear_potential_newton") return ComparatorKind::linear_potential_newton;
  if (name == "classical_relativistic") return ComparatorKind::classical_relativistic;
  throw std::invalid_argument("unknown comparator kind '" + name + "'");
}

ComparatorSeries analytic_comparators(ComparatorKind kind, const ComparatorParams& c,
                                      std::span<const double> times) {
  ComparatorSeries s;
  s.t.assign(times.begin(), times.end());
  for (double t : times) {
    switch (kind) {
      case ComparatorKind::free_gaussian_spread: {
        const double spread = units::hbar * t / (2.0 * c.mass * c.sigma_x);
        s.value.push_back(c.sigma_x * c.sigma_x + spread * spread);
        break;
      }
      case ComparatorKind::linear_potential_newton:
        s.value.push_back(c.x0 + c.p0 * t / c.mass + 0.5 * c.force * t * t / c.mass);
        s.secondary.push_back(c.p0 + c.force * t);
        break;
      case ComparatorKind::classical_relativistic: {
        const double p = c.p0 + c.force * t;
        const double mc = c.mass * c.light_speed;
        s.value.push_back(c.light_speed * p / std::sqrt(mc * mc + p * p));
        s.secondary.push_back(p);
        break;
      }
    }
  }
  return s;
}

}  // namespace qre::oracle
