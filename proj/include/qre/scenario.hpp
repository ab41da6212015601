#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qre/config.hpp"
#include "qre/grid.hpp"
#include "qre/observables.hpp"
#include "qre/propagator.hpp"
#include "qre/synthesis.hpp"

namespace qre {

// Everything a run needs, derived from a config.
struct ScenarioSetup {
  GridPtr grid;
  double mass = 0.0;
  std::vector<double> potential;             // U(x) in the Hamiltonian
  std::vector<double> potential_derivative;  // U'(x), closed form
  std::vector<double> kinetic;               // T(p); empty means p^2/2m
  std::vector<LindbladOp> ops;
  TargetDynamics targets;                    // F(x), G(p) the environment enforces
  std::optional<double> validity_margin;     // jets only
  GaussianSpec state;
  Schedule schedule;
  std::optional<double> x_threshold;
};

// Throws ConfigError for inconsistent parameters and InfeasibleError when the
// environment cannot be synthesized or the jet validity margin is below 1.
ScenarioSetup build_setup(const ScenarioConfig& config);

// Same setup with the environment removed. For the effective-mass and
// relativistic environments the mass and dispersion of the target motion are
// used instead (bare particle of mass M, or T(p) = c sqrt(m^2 c^2 + p^2)).
ScenarioSetup environment_free_setup(const ScenarioConfig& config);

struct Column {
  std::string name;
  std::vector<double> values;
};

struct RunOptions {
  GuardLimits limits;
  bool audit_positivity = false;  // smallest eigenvalue of the final state
  bool comparators = true;
};

struct ScenarioResult {
  TimeSeries series;
  std::vector<Column> comparators;  // aligned with series.records
  RunDiagnostics diagnostics;
  std::optional<double> validity_margin;
  std::optional<double> final_min_eigenvalue;
  double max_phase_increment = 0.0;
  std::optional<DensityMatrix> final_state;
};

// Measures the propagated run with the setup's targets.
ScenarioResult run_setup(const ScenarioSetup& setup, const RunOptions& options = {});

// Builds, propagates, measures and attaches the comparator columns selected in
// the config. Nothing is written to disk.
ScenarioResult run_scenario(const ScenarioConfig& config, const RunOptions& options = {});

// Metadata lines (key, value) describing the run, echoed into file headers.
std::vector<std::pair<std::string, std::string>> run_metadata(const ScenarioConfig& config,
                                                              const ScenarioSetup& setup);

// Smallest validity margin of the jets over the grid for a given p0 and Cp0,
// or nullopt if the jet discriminant is negative somewhere.
std::optional<double> jet_margin(const ScenarioConfig& config, double p0, double Cp0);

// Largest p0 with margin >= 1 at fixed Cp0 (bisection on the grid margin).
double margin_endpoint(const ScenarioConfig& config, double Cp0);

struct SweepPoint {
  double value = 0.0;   // swept parameter
  double level = 0.0;   // Cp0 (or C) of the curve, p0 sweeps only
  double p0 = 0.0;
  double Cp0 = 0.0;
  double C = 0.0;
  std::string status;   // "ok" or the reason the point was skipped
  std::optional<double> margin;
  std::optional<ObservableRecord> final_record;
  std::optional<double> free_transmission;  // analytic free packet at the final time
  std::optional<ScenarioResult> result;     // kept when requested
};

struct SweepTable {
  std::string parameter;
  std::vector<double> levels;  // empty for Cp0 and C sweeps
  std::vector<double> values;  // row values
  std::vector<SweepPoint> points;  // row-major: values x max(levels, 1)
};

// Concrete config of one sweep point.
ScenarioConfig sweep_point_config(const ScenarioConfig& config, double value, double level);

// Row values of a sweep (explicit values or the automatic p0 list).
std::vector<double> sweep_values(const ScenarioConfig& config);

// Runs every point on `workers` threads. Points are independent and
// deterministic, so the table does not depend on the worker count. Throws
// InfeasibleError when no point is feasible.
SweepTable run_sweep(const ScenarioConfig& config, int workers, bool keep_results = false);

struct FeasibilityReport {
  bool feasible = true;
  std::vector<std::string> lines;
};

// Checks that need no propagation: grid, initial packet, environment
// synthesis, validity margin, phase increment per substep, and every sweep
// point. Throws ConfigError for problems that are not feasibility failures.
FeasibilityReport validate(const ScenarioConfig& config);

// Small-grid cross-validation of the split-operator propagator against the
// dense Liouvillian integrated with RK4.
struct OracleCase {
  std::string family;
  std::size_t n_points = 32;
  double dt = 0.0;
  long steps = 0;
  double distance = 0.0;         // weighted Hilbert-Schmidt distance at the end
  double min_eigenvalue = 0.0;   // of the split-operator final state
  double trace_drift = 0.0;
  double hermiticity_defect = 0.0;
  double max_purity = 0.0;
};

std::vector<std::string> oracle_families();
ScenarioConfig oracle_config(const std::string& family, std::size_t n_points = 32);
OracleCase run_oracle_case(const std::string& family, std::size_t n_points = 32,
                           long steps = 100);

}  // namespace qre
