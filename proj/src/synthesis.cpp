#include "qre/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "qre/errors.hpp"
#include "qre/units.hpp"

namespace qre {

LindbladOp::LindbladOp(Representation rep, std::vector<double> magnitude,
                       std::vector<double> phase)
    : rep_(rep), magnitude_(std::move(magnitude)), phase_(std::move(phase)) {
  if (magnitude_.size() != phase_.size())
    throw std::invalid_argument("LindbladOp: magnitude and phase sizes differ");
}

std::vector<cplx> LindbladOp::values() const {
  std::vector<cplx> v(size());
  for (std::size_t i = 0; i < size(); ++i) v[i] = std::polar(magnitude_[i], phase_[i]);
  return v;
}

LindbladOp LindbladOp::with_global_phase(double phi0) const {
  auto shifted = phase_;
  for (auto& t : shifted) t += phi0;
  return LindbladOp(rep_, magnitude_, std::move(shifted));
}

namespace {

void require_size(std::span<const double> v, const PhaseGrid& grid, const char* what) {
  if (v.size() != grid.size())
    throw std::invalid_argument(std::string(what) + ": sample count does not match grid");
}

// Integrand numerator/denominator_sq in ascending axis order.
std::vector<double> ordered_integrand(std::span<const double> numerator,
                                      std::span<const double> denominator_sq,
                                      const std::vector<std::size_t>& order) {
  std::vector<double> f(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    const std::size_t i = order[k];
    if (denominator_sq[i] == 0.0) {
      if (numerator[i] != 0.0) {
        std::ostringstream msg;
        msg << "bath magnitude vanishes at node " << i << " where its drift is "
            << numerator[i];
        throw InfeasibleError(msg.str());
      }
      f[k] = 0.0;
    } else {
      f[k] = numerator[i] / denominator_sq[i];
    }
  }
  return f;
}

std::vector<double> trapezoid_ascending(const std::vector<double>& f, double h) {
  std::vector<double> acc(f.size(), 0.0);
  for (std::size_t k = 1; k < f.size(); ++k) acc[k] = acc[k - 1] + 0.5 * h * (f[k - 1] + f[k]);
  return acc;
}

// First derivative on a uniform grid, second order everywhere.
std::vector<double> derivative_ascending(const std::vector<double>& f, double h) {
  const std::size_t n = f.size();
  std::vector<double> d(n);
  d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
  d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
  for (std::size_t k = 1; k + 1 < n; ++k) d[k] = (f[k + 1] - f[k - 1]) / (2.0 * h);
  return d;
}

std::vector<double> scatter(const std::vector<double>& ascending,
                            const std::vector<std::size_t>& order) {
  std::vector<double> out(ascending.size());
  for (std::size_t k = 0; k < order.size(); ++k) out[order[k]] = ascending[k];
  return out;
}

}  // namespace

std::vector<double> cumulative_phase(std::span<const double> numerator,
                                     std::span<const double> denominator_sq,
                                     const PhaseGrid& grid, Representation axis) {
  require_size(numerator, grid, "cumulative_phase");
  require_size(denominator_sq, grid, "cumulative_phase");
  const auto order = grid.ascending_order(axis);
  const double h = grid.spacing(axis);
  const auto f = ordered_integrand(numerator, denominator_sq, order);
  auto acc = trapezoid_ascending(f, h);
  const auto df = derivative_ascending(f, h);
  // Euler-Maclaurin: integral = trapezoid - h^2/12 (f'(b) - f'(a)) + O(h^4)
  for (std::size_t k = 0; k < acc.size(); ++k) acc[k] -= h * h / 12.0 * (df[k] - df[0]);
  return scatter(acc, order);
}

std::vector<double> cumulative_phase_trapezoid(std::span<const double> numerator,
                                               std::span<const double> denominator_sq,
                                               const PhaseGrid& grid,
                                               Representation axis) {
  require_size(numerator, grid, "cumulative_phase");
  require_size(denominator_sq, grid, "cumulative_phase");
  const auto order = grid.ascending_order(axis);
  const auto f = ordered_integrand(numerator, denominator_sq, order);
  return scatter(trapezoid_ascending(f, grid.spacing(axis)), order);
}

namespace {

std::vector<double> squared(std::span<const double> v) {
  std::vector<double> out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), [](double a) { return a * a; });
  return out;
}

}  // namespace

LindbladOp build_position_lindblad(std::span<const double> force,
                                   std::span<const double> magnitude,
                                   const PhaseGrid& grid) {
  require_size(magnitude, grid, "build_position_lindblad");
  auto phase = cumulative_phase(force, squared(magnitude), grid, Representation::position);
  return LindbladOp(Representation::position,
                    std::vector<double>(magnitude.begin(), magnitude.end()),
                    std::move(phase));
}

LindbladOp build_momentum_lindblad(std::span<const double> velocity,
                                   std::span<const double> magnitude,
                                   const PhaseGrid& grid) {
  require_size(magnitude, grid, "build_momentum_lindblad");
  auto phase = cumulative_phase(velocity, squared(magnitude), grid, Representation::momentum);
  for (auto& t : phase) t = -t;
  return LindbladOp(Representation::momentum,
                    std::vector<double>(magnitude.begin(), magnitude.end()),
                    std::move(phase));
}

std::vector<double> recovered_drift(const LindbladOp& op, const PhaseGrid& grid) {
  const auto rep = op.representation();
  const auto order = grid.ascending_order(rep);
  const double h = grid.spacing(rep);
  const auto values = op.values();
  const std::size_t n = values.size();
  std::vector<double> asc(n);
  for (std::size_t k = 0; k < n; ++k) {
    cplx deriv;
    if (k == 0)
      deriv = (-3.0 * values[order[0]] + 4.0 * values[order[1]] - values[order[2]]) / (2.0 * h);
    else if (k == n - 1)
      deriv = (3.0 * values[order[n - 1]] - 4.0 * values[order[n - 2]] + values[order[n - 3]]) /
              (2.0 * h);
    else
      deriv = (values[order[k + 1]] - values[order[k - 1]]) / (2.0 * h);
    const double im = std::imag(std::conj(values[order[k]]) * deriv);
    asc[k] = rep == Representation::position ? im : -im;
  }
  return scatter(asc, order);
}

JetEnvironment jets_from_barrier(std::span<const double> potential_derivative,
                                 double coupling, double p0, const PhaseGrid& grid) {
  require_size(potential_derivative, grid, "jets_from_barrier");
  if (!(coupling > 0.0) || !(p0 > 0.0))
    throw InfeasibleError("jets need positive coupling C and electron momentum p0");
  const std::size_t n = grid.size();
  const double c2 = coupling * coupling;
  const double hbar = units::hbar;

  std::vector<double> beta(n), p_plus(n), p_minus(n), f_plus(n), f_minus(n);
  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double du = potential_derivative[i];
    const double discriminant = 16.0 * p0 * p0 * c2 * c2 - hbar * hbar * du * du;
    if (discriminant < 0.0) {
      std::ostringstream msg;
      msg << "jet environment infeasible for C=" << coupling << ", p0=" << p0
          << ": need 4 p0 C^2 >= hbar max|dU/dx| (fails at x=" << grid.x()[i] << ")";
      throw InfeasibleError(msg.str());
    }
    const double root = std::sqrt(discriminant);
    beta[i] = hbar * du * root / (8.0 * c2 * c2);
    // Branch of p~_+- = sqrt(p0^2 +- beta) that satisfies
    // p~_+ - p~_- = hbar U' / (2C^2); principal while both are >= 0.
    const double diff = hbar * du / (2.0 * c2);
    const double mean = root / (4.0 * c2);
    p_plus[i] = mean + 0.5 * diff;
    p_minus[i] = mean - 0.5 * diff;
    f_plus[i] = 2.0 * c2 * p_plus[i] / hbar;
    f_minus[i] = -2.0 * c2 * p_minus[i] / hbar;
    // p0^2/|beta| on the principal branch; once the slower jet reverses
    // (q < 0) the signed square continues the margin below 1.
    const double q = std::min(p_plus[i], p_minus[i]);
    const double deficit = p0 * p0 - (q >= 0.0 ? q * q : -q * q);
    if (deficit != 0.0) margin = std::min(margin, p0 * p0 / std::abs(deficit));
  }
  const std::vector<double> magnitude(n, coupling);
  return JetEnvironment{build_position_lindblad(f_plus, magnitude, grid),
                        build_position_lindblad(f_minus, magnitude, grid),
                        std::move(beta),
                        std::move(p_plus),
                        std::move(p_minus),
                        p0,
                        coupling,
                        margin};
}

JetEnvironment trap_from_potential(std::span<const double> effective_derivative,
                                   double coupling, double p0, const PhaseGrid& grid) {
  std::vector<double> negated(effective_derivative.begin(), effective_derivative.end());
  for (auto& v : negated) v = -v;
  return jets_from_barrier(negated, coupling, p0, grid);
}

LindbladOp effective_mass_op(double mass, double effective_mass, double coupling,
                             const PhaseGrid& grid) {
  if (!(mass > 0.0) || !(effective_mass > 0.0) || !(coupling > 0.0))
    throw std::invalid_argument("effective_mass_op: m, M and C must be positive");
  const auto p = grid.p();
  std::vector<double> phase(p.size());
  const double k = (mass - effective_mass) / (2.0 * mass * effective_mass * coupling * coupling);
  for (std::size_t j = 0; j < p.size(); ++j) phase[j] = -k * p[j] * p[j];
  return LindbladOp(Representation::momentum, std::vector<double>(p.size(), coupling),
                    std::move(phase));
}

LindbladOp relativistic_op(double mass, double light_speed, double coupling,
                           const PhaseGrid& grid) {
  if (!(mass > 0.0) || !(light_speed > 0.0) || !(coupling > 0.0))
    throw std::invalid_argument("relativistic_op: m, c and C must be positive");
  const auto p = grid.p();
  const double mc = mass * light_speed;
  std::vector<double> phase(p.size());
  for (std::size_t j = 0; j < p.size(); ++j)
    phase[j] = (p[j] * p[j] / (2.0 * mass) - light_speed * std::sqrt(mc * mc + p[j] * p[j])) /
               (coupling * coupling);
  return LindbladOp(Representation::momentum, std::vector<double>(p.size(), coupling),
                    std::move(phase));
}

std::vector<double> relativistic_velocity(double mass, double light_speed,
                                          const PhaseGrid& grid) {
  const auto p = grid.p();
  std::vector<double> g(p.size());
  for (std::size_t j = 0; j < p.size(); ++j)
    g[j] = p[j] / std::sqrt(mass * mass + p[j] * p[j] / (light_speed * light_speed));
  return g;
}

void check_decomposition(const BathDecomposition& baths, const TargetDynamics& targets,
                         std::span<const double> potential_derivative, double mass,
                         const PhaseGrid& grid, double tolerance) {
  const std::size_t n = grid.size();
  require_size(targets.force, grid, "targets.force");
  require_size(targets.velocity, grid, "targets.velocity");
  require_size(potential_derivative, grid, "potential derivative");
  for (const auto& b : baths.position_baths) {
    require_size(b.force, grid, "position bath");
    require_size(b.magnitude, grid, "position bath");
  }
  for (const auto& b : baths.momentum_baths) {
    require_size(b.velocity, grid, "momentum bath");
    require_size(b.magnitude, grid, "momentum bath");
  }
  const auto p = grid.p();
  for (std::size_t i = 0; i < n; ++i) {
    double fsum = 0.0, gsum = 0.0;
    for (const auto& b : baths.position_baths) {
      if (b.force[i] != 0.0 && b.magnitude[i] == 0.0)
        throw InfeasibleError("position bath magnitude vanishes where its force is nonzero");
      fsum += b.force[i];
    }
    for (const auto& b : baths.momentum_baths) {
      if (b.velocity[i] != 0.0 && b.magnitude[i] == 0.0)
        throw InfeasibleError("momentum bath magnitude vanishes where its velocity is nonzero");
      gsum += b.velocity[i];
    }
    const double f_required = targets.force[i] + potential_derivative[i];
    const double g_required = targets.velocity[i] - p[i] / mass;
    if (std::abs(fsum - f_required) > tolerance) {
      std::ostringstream msg;
      msg << "position baths sum to " << fsum << " but F + dU/dx = " << f_required
          << " at x=" << grid.x()[i];
      throw InfeasibleError(msg.str());
    }
    if (std::abs(gsum - g_required) > tolerance) {
      std::ostringstream msg;
      msg << "momentum baths sum to " << gsum << " but G - p/m = " << g_required
          << " at p=" << p[i];
      throw InfeasibleError(msg.str());
    }
  }
}

BathDecomposition default_decomposition(const TargetDynamics& targets,
                                        std::span<const double> potential_derivative,
                                        double mass, double position_magnitude,
                                        double momentum_magnitude, const PhaseGrid& grid) {
  const std::size_t n = grid.size();
  require_size(targets.force, grid, "targets.force");
  require_size(targets.velocity, grid, "targets.velocity");
  require_size(potential_derivative, grid, "potential derivative");
  const auto p = grid.p();
  std::vector<double> f(n), g(n);
  bool any_f = false, any_g = false;
  for (std::size_t i = 0; i < n; ++i) {
    f[i] = targets.force[i] + potential_derivative[i];
    g[i] = targets.velocity[i] - p[i] / mass;
    any_f = any_f || f[i] != 0.0;
    any_g = any_g || g[i] != 0.0;
  }
  BathDecomposition baths;
  if (any_f) {
    if (!(position_magnitude > 0.0))
      throw InfeasibleError("a position bath is required but its magnitude is not positive");
    baths.position_baths.push_back({std::move(f), std::vector<double>(n, position_magnitude)});
  }
  if (any_g) {
    if (!(momentum_magnitude > 0.0))
      throw InfeasibleError("a momentum bath is required but its magnitude is not positive");
    baths.momentum_baths.push_back({std::move(g), std::vector<double>(n, momentum_magnitude)});
  }
  return baths;
}

std::vector<LindbladOp> synthesize(const BathDecomposition& baths,
                                   const TargetDynamics& targets,
                                   std::span<const double> potential_derivative,
                                   double mass, const PhaseGrid& grid) {
  check_decomposition(baths, targets, potential_derivative, mass, grid);
  std::vector<LindbladOp> ops;
  for (const auto& b : baths.position_baths)
    ops.push_back(build_position_lindblad(b.force, b.magnitude, grid));
  for (const auto& b : baths.momentum_baths)
    ops.push_back(build_momentum_lindblad(b.velocity, b.magnitude, grid));
  return ops;
}

}  // namespace qre
