#pragma once

// Construction of Lindblad operators that are diagonal in position or in
// momentum, from prescribed mean-force and mean-velocity laws.
//
// A position-diagonal operator A(x) = R(x) exp(i theta(x)) with
// theta' = f / R^2 adds the force f(x) to d<p>/dt and leaves d<x>/dt alone.
// A momentum-diagonal operator B(p) = S(p) exp(-i phi(p)) with phi' = g / S^2
// adds the velocity g(p) to d<x>/dt. Summing baths so that
//   sum_k f_k = F + U'   and   sum_n g_n = G - p/m
// makes the Ehrenfest means follow d<x>/dt = <G(p)>, d<p>/dt = <F(x)> for
// any initial state.

#include <optional>
#include <span>
#include <vector>

#include "qre/grid.hpp"

namespace qre {

struct TargetDynamics {
  std::vector<double> force;     // F over the position grid
  std::vector<double> velocity;  // G over the momentum grid (FFT order)
};

struct PositionBath {
  std::vector<double> force;      // f_k(x)
  std::vector<double> magnitude;  // R_k(x)
};

struct MomentumBath {
  std::vector<double> velocity;   // g_n(p)
  std::vector<double> magnitude;  // S_n(p)
};

struct BathDecomposition {
  std::vector<PositionBath> position_baths;
  std::vector<MomentumBath> momentum_baths;
};

class LindbladOp {
 public:
  LindbladOp(Representation rep, std::vector<double> magnitude,
             std::vector<double> phase);

  Representation representation() const { return rep_; }
  std::span<const double> magnitude() const { return magnitude_; }
  std::span<const double> phase() const { return phase_; }
  std::size_t size() const { return magnitude_.size(); }

  // magnitude * exp(i phase)
  std::vector<cplx> values() const;

  // The same operator times a constant global phase exp(i phi0).
  LindbladOp with_global_phase(double phi0) const;

 private:
  Representation rep_;
  std::vector<double> magnitude_;
  std::vector<double> phase_;
};

// Two electron jets A_+ and A_- with constant magnitude C.
struct JetEnvironment {
  LindbladOp a_plus;
  LindbladOp a_minus;
  std::vector<double> beta;       // 2 mu_B m_e B(x)
  std::vector<double> p_plus;     // p~_+(x)
  std::vector<double> p_minus;    // p~_-(x)
  double p0 = 0.0;
  double coupling = 0.0;          // C
  double validity_margin = 0.0;   // min_x p0^2 / |beta(x)|

  std::vector<LindbladOp> ops() const { return {a_plus, a_minus}; }
};

// Cumulative integral of numerator / denominator_sq along the chosen axis,
// starting at the leftmost node (most negative momentum on the momentum
// axis) with value 0. Uses the trapezoid rule with the Euler-Maclaurin
// endpoint correction, fourth order for smooth integrands. Results are
// returned in grid storage order.
std::vector<double> cumulative_phase(std::span<const double> numerator,
                                     std::span<const double> denominator_sq,
                                     const PhaseGrid& grid, Representation axis);

// Plain composite trapezoid variant, kept for comparison in tests.
std::vector<double> cumulative_phase_trapezoid(std::span<const double> numerator,
                                               std::span<const double> denominator_sq,
                                               const PhaseGrid& grid,
                                               Representation axis);

LindbladOp build_position_lindblad(std::span<const double> force,
                                   std::span<const double> magnitude,
                                   const PhaseGrid& grid);
LindbladOp build_momentum_lindblad(std::span<const double> velocity,
                                   std::span<const double> magnitude,
                                   const PhaseGrid& grid);

// Drift recovered from an operator by centered differences:
// position op -> Im(conj(A) A'), momentum op -> -Im(conj(B) B').
std::vector<double> recovered_drift(const LindbladOp& op, const PhaseGrid& grid);

// Jets that cancel the force of `potential_derivative` (the system keeps U in
// its Hamiltonian). Throws InfeasibleError when 4 p0 C^2 < hbar max|U'|.
JetEnvironment jets_from_barrier(std::span<const double> potential_derivative,
                                 double coupling, double p0, const PhaseGrid& grid);

// Jets that mimic the potential U_eff while the Hamiltonian carries U = 0.
JetEnvironment trap_from_potential(std::span<const double> effective_derivative,
                                   double coupling, double p0, const PhaseGrid& grid);

// B(p) = C exp[-i (m - M) p^2 / (2 m M C^2)]: mean velocity p/M.
LindbladOp effective_mass_op(double mass, double effective_mass, double coupling,
                             const PhaseGrid& grid);

// B(p) = C exp[(i/C^2)(p^2/2m - c sqrt(m^2c^2 + p^2))]:
// mean velocity p / sqrt(m^2 + p^2/c^2).
LindbladOp relativistic_op(double mass, double light_speed, double coupling,
                           const PhaseGrid& grid);

// Velocity law G(p) = p / sqrt(m^2 + p^2/c^2) on the momentum grid.
std::vector<double> relativistic_velocity(double mass, double light_speed,
                                          const PhaseGrid& grid);

// Checks sum_k f_k = F + U' and sum_n g_n = G - p/m on every node within
// `tolerance` and that magnitudes do not vanish where drifts are nonzero.
// Throws InfeasibleError describing the first violation.
void check_decomposition(const BathDecomposition& baths, const TargetDynamics& targets,
                         std::span<const double> potential_derivative, double mass,
                         const PhaseGrid& grid, double tolerance = 1e-10);

// Single position bath with constant R and single momentum bath with constant
// S carrying the whole required drift. A bath whose drift vanishes
// identically is omitted (a constant operator generates no dynamics).
BathDecomposition default_decomposition(const TargetDynamics& targets,
                                        std::span<const double> potential_derivative,
                                        double mass, double position_magnitude,
                                        double momentum_magnitude, const PhaseGrid& grid);

// Operators for a checked decomposition.
std::vector<LindbladOp> synthesize(const BathDecomposition& baths,
                                   const TargetDynamics& targets,
                                   std::span<const double> potential_derivative,
                                   double mass, const PhaseGrid& grid);

}  // namespace qre
