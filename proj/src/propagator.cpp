#include "qre/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "qre/errors.hpp"
#include "qre/parallel_kernels.hpp"
#include "qre/units.hpp"

namespace qre {

std::vector<double> kinetic_energy(const PhaseGrid& grid, double mass) {
  if (!(mass > 0.0)) throw std::invalid_argument("mass must be positive");
  const auto p = grid.p();
  std::vector<double> t(p.size());
  for (std::size_t j = 0; j < p.size(); ++j)
    t[j] = std::isinf(mass) ? 0.0 : p[j] * p[j] / (2.0 * mass);
  return t;
}

KernelSet build_kernels(const GridPtr& grid, std::span<const double> potential,
                        double mass, const std::vector<LindbladOp>& ops, double dt) {
  const auto t = kinetic_energy(*grid, mass);
  return build_kernels(grid, potential, t, ops, dt);
}

namespace {

void pack_ops(const std::vector<LindbladOp>& ops, Representation rep, std::size_t n,
              std::vector<double>& magnitudes, std::vector<double>& phases) {
  for (const auto& op : ops) {
    if (op.representation() != rep) continue;
    if (op.size() != n) throw std::invalid_argument("build_kernels: operator size mismatch");
    magnitudes.insert(magnitudes.end(), op.magnitude().begin(), op.magnitude().end());
    phases.insert(phases.end(), op.phase().begin(), op.phase().end());
  }
}

}  // namespace

KernelSet build_kernels(const GridPtr& grid, std::span<const double> potential,
                        std::span<const double> kinetic,
                        const std::vector<LindbladOp>& ops, double dt) {
  const std::size_t n = grid->size();
  if (potential.size() != n || kinetic.size() != n)
    throw std::invalid_argument("build_kernels: potential/kinetic sample count mismatch");
  if (!(dt > 0.0)) throw std::invalid_argument("build_kernels: dt must be positive");

  KernelSet ks;
  ks.grid = grid;
  ks.dt = dt;
  ks.dt_x = 0.5 * dt;
  ks.dt_p = dt;
  ks.position_kernel.resize(n * n);
  ks.momentum_kernel.resize(n * n);

  std::vector<double> mag_x, ph_x, mag_p, ph_p;
  pack_ops(ops, Representation::position, n, mag_x, ph_x);
  pack_ops(ops, Representation::momentum, n, mag_p, ph_p);

  // Both generator pieces carry an overall 1/hbar.
  const double phase_x = kernels::build_pair_kernel(ks.position_kernel, potential, mag_x,
                                                    ph_x, n, ks.dt_x / units::hbar);
  const double phase_p = kernels::build_pair_kernel(ks.momentum_kernel, kinetic, mag_p,
                                                    ph_p, n, ks.dt_p / units::hbar);
  ks.max_phase_increment = std::max(phase_x, phase_p);

  ks.momentum_step_factor = ks.momentum_kernel;
  const double inv = 1.0 / (static_cast<double>(n) * static_cast<double>(n));
  for (auto& v : ks.momentum_step_factor) v *= inv;
  return ks;
}

void strang_step_inplace(DensityMatrix& rho, const KernelSet& ks) {
  if (rho.representation() != Representation::position)
    throw std::invalid_argument("strang_step: state must be in the position representation");
  if (rho.size() != ks.grid->size())
    throw std::invalid_argument("strang_step: grid mismatch");
  const std::size_t n = rho.size();
  kernels::multiply_pointwise(rho.data(), ks.position_kernel);
  kernels::two_sided_transform(rho.data(), n, kernels::TwoSided::to_momentum, 1.0);
  kernels::multiply_pointwise(rho.data(), ks.momentum_step_factor);
  kernels::two_sided_transform(rho.data(), n, kernels::TwoSided::to_position, 1.0);
  kernels::multiply_pointwise(rho.data(), ks.position_kernel);
}

DensityMatrix strang_step(const DensityMatrix& rho, const KernelSet& ks) {
  DensityMatrix out = rho;
  strang_step_inplace(out, ks);
  return out;
}

namespace {

double band_mass(const DensityMatrix& rho, double edge_fraction) {
  const auto& g = rho.grid();
  const auto order = g.ascending_order(rho.representation());
  const std::size_t n = g.size();
  const auto band = static_cast<std::size_t>(std::ceil(edge_fraction * static_cast<double>(n)));
  double acc = 0.0;
  for (std::size_t k = 0; k < band; ++k) {
    acc += rho(order[k], order[k]).real();
    acc += rho(order[n - 1 - k], order[n - 1 - k]).real();
  }
  return std::abs(acc) * rho.weight();
}

}  // namespace

double edge_density(const DensityMatrix& position, const DensityMatrix& momentum,
                    double edge_fraction) {
  return std::max(band_mass(position, edge_fraction), band_mass(momentum, edge_fraction));
}

PropagationResult propagate(const DensityMatrix& rho0, const KernelSet& kernels,
                            const Schedule& schedule, const Observer& observer,
                            const GuardLimits& limits, double t0) {
  if (!(schedule.dt > 0.0)) throw ConfigError("schedule: dt must be positive");
  if (schedule.n_steps < 0) throw ConfigError("schedule: n_steps must be nonnegative");
  if (schedule.record_every < 1) throw ConfigError("schedule: record_every must be >= 1");
  if (std::abs(schedule.dt - kernels.dt) > 1e-12 * schedule.dt)
    throw std::invalid_argument("propagate: kernels were built for a different dt");

  RunDiagnostics diag;
  if (kernels.max_phase_increment > limits.phase_error) {
    std::ostringstream msg;
    msg << "schedule: phase increment per substep " << kernels.max_phase_increment
        << " rad exceeds " << limits.phase_error << " rad; reduce dt";
    throw ConfigError(msg.str());
  }
  if (kernels.max_phase_increment > limits.phase_warning) {
    std::ostringstream msg;
    msg << "phase increment per substep " << kernels.max_phase_increment << " rad exceeds "
        << limits.phase_warning << " rad";
    diag.warnings.push_back(msg.str());
  }

  DensityMatrix rho = rho0;
  if (rho.representation() != Representation::position) rho = to_position_rep(rho);
  const double trace0 = rho.trace();

  auto checkpoint = [&](long step) {
    const double t = t0 + static_cast<double>(step) * schedule.dt;
    const DensityMatrix mom = to_momentum_rep(rho);
    const double drift = std::abs(rho.trace() - trace0);
    const double purity = rho.purity();
    const double herm = rho.hermiticity_defect();
    const double edge = edge_density(rho, mom, limits.edge_fraction);
    diag.max_trace_drift = std::max(diag.max_trace_drift, drift);
    diag.max_purity = std::max(diag.max_purity, purity);
    diag.max_hermiticity_defect = std::max(diag.max_hermiticity_defect, herm);
    diag.max_edge_density = std::max(diag.max_edge_density, edge);
    if (observer) observer(Snapshot{step, t, rho, mom});
    std::ostringstream msg;
    if (edge > limits.edge_density * std::abs(trace0))
      msg << "edge density " << edge << " exceeds " << limits.edge_density
          << " of the trace (box too small or momentum grid too coarse)";
    else if (drift > limits.trace_drift)
      msg << "trace drift " << drift << " exceeds " << limits.trace_drift;
    else if (purity > 1.0 + limits.purity_overshoot)
      msg << "purity " << purity << " exceeds 1 + " << limits.purity_overshoot;
    if (!msg.str().empty()) {
      msg << " at step " << step << ", t=" << t;
      throw GuardTrip(msg.str(), step, t);
    }
  };

  checkpoint(0);
  for (long step = 1; step <= schedule.n_steps; ++step) {
    strang_step_inplace(rho, kernels);
    if (step % schedule.record_every == 0 || step == schedule.n_steps) checkpoint(step);
  }
  return PropagationResult{std::move(rho), std::move(diag)};
}

}  // namespace qre
