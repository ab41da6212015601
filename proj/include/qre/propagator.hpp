#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "qre/grid.hpp"
#include "qre/synthesis.hpp"

namespace qre {

// Pointwise propagation factors for one Strang step.
//
// position_kernel(i,j) = exp(dt_x * L_x(x_i, x_j)) with
//   L_x = -(i/hbar)(U(x) - U(x')) + (1/hbar) sum_k [A_k(x) conj(A_k(x')) - |A_k(x)|^2/2 - |A_k(x')|^2/2]
// and the momentum kernel built the same way from T(p) and the B_n. Each
// factor solves its own part of the master equation exactly.
struct KernelSet {
  GridPtr grid;
  std::vector<cplx> position_kernel;  // over dt_x = dt / 2
  std::vector<cplx> momentum_kernel;  // over dt_p = dt
  double dt = 0.0;
  double dt_x = 0.0;
  double dt_p = 0.0;
  // Largest |Im exponent| * substep over both kernels (radians).
  double max_phase_increment = 0.0;

  // momentum_kernel / n^2, folding the unnormalized FFT round trip into the
  // pointwise multiply of the hot loop
  std::vector<cplx> momentum_step_factor;
};

// Kinetic energy p^2 / 2m on the momentum grid. mass = +inf gives zeros.
std::vector<double> kinetic_energy(const PhaseGrid& grid, double mass);

KernelSet build_kernels(const GridPtr& grid, std::span<const double> potential,
                        double mass, const std::vector<LindbladOp>& ops, double dt);

// Same with an explicit dispersion T(p) in place of p^2/2m.
KernelSet build_kernels(const GridPtr& grid, std::span<const double> potential,
                        std::span<const double> kinetic,
                        const std::vector<LindbladOp>& ops, double dt);

struct Schedule {
  double dt = 0.0;
  long n_steps = 0;
  long record_every = 1;
};

struct GuardLimits {
  double edge_fraction = 0.05;  // width of each edge band, fraction of the axis
  double edge_density = 1e-6;   // allowed probability in the edge bands
  double trace_drift = 1e-8;
  double purity_overshoot = 1e-8;
  double phase_error = 0.5;     // rad per substep, hard limit
  double phase_warning = 0.1;   // rad per substep, reported
};

// Position-space state after `step` steps, with its momentum representation.
struct Snapshot {
  long step;
  double t;
  const DensityMatrix& position;
  const DensityMatrix& momentum;
};

using Observer = std::function<void(const Snapshot&)>;

struct RunDiagnostics {
  double max_trace_drift = 0.0;
  double max_hermiticity_defect = 0.0;
  double max_purity = 0.0;
  double max_edge_density = 0.0;
  std::vector<std::string> warnings;
};

struct PropagationResult {
  DensityMatrix final_state;
  RunDiagnostics diagnostics;
};

// One symmetric step: half position kernel, momentum kernel, half position
// kernel. The input must be in the position representation.
DensityMatrix strang_step(const DensityMatrix& rho, const KernelSet& kernels);
void strang_step_inplace(DensityMatrix& rho, const KernelSet& kernels);

// Probability in the outer bands of the position diagonal and of the momentum
// diagonal, whichever is larger.
double edge_density(const DensityMatrix& position, const DensityMatrix& momentum,
                    double edge_fraction);

// Runs schedule.n_steps Strang steps starting at t0, calling `observer` on the
// initial state and every record_every steps (and on the final state). Throws
// GuardTrip when a guard limit is exceeded at a recorded step and ConfigError
// when the schedule violates the phase-increment limit.
PropagationResult propagate(const DensityMatrix& rho0, const KernelSet& kernels,
                            const Schedule& schedule, const Observer& observer,
                            const GuardLimits& limits = {}, double t0 = 0.0);

}  // namespace qre
