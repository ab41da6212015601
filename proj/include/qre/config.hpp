#pragma once

// Experiment description read from a small TOML-style document:
//
//   [section]
//   key = 1.5e-3          # numbers
//   key = "text"          # strings
//   key = true            # booleans
//   key = [1e-4, 2e-4]    # number arrays
//
// Every experiment kind has a complete set of defaults, so a document with
// only `[scenario] kind = "tunneling"` is a valid run. Unknown sections and
// keys are rejected.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace qre {

enum class ScenarioKind { tunneling, trapping, effective_mass, relativistic, custom };
enum class PotentialKind { none, gaussian_barrier, harmonic, ramp };
enum class EnvironmentKind { none, jets, trap, effective_mass, relativistic };

std::string to_string(ScenarioKind k);
std::string to_string(PotentialKind k);
std::string to_string(EnvironmentKind k);

struct GridConfig {
  std::size_t n_points = 0;
  double x_min = 0.0;
  double x_max = 0.0;
  bool operator==(const GridConfig&) const = default;
};

struct StateConfig {
  double x0 = 0.0;
  double p0_mean = 0.0;
  double sigma_x = 0.0;
  bool operator==(const StateConfig&) const = default;
};

// gaussian_barrier: 2 K0 exp(-x^2/2); harmonic: m omega^2 x^2 / 2; ramp: slope x.
struct PotentialConfig {
  PotentialKind type = PotentialKind::none;
  double K0 = 0.0;
  double omega = 0.0;
  double slope = 0.0;
  bool operator==(const PotentialConfig&) const = default;
};

// jets: electron jets cancelling the force of the Hamiltonian potential.
// trap: jets reproducing the harmonic potential m omega^2 x^2 / 2 while the
// Hamiltonian keeps only the configured potential.
// Jets are parameterized by p0 and Cp0; C = Cp0 / p0.
struct EnvironmentConfig {
  EnvironmentKind type = EnvironmentKind::none;
  double p0 = 0.0;
  double Cp0 = 0.0;
  double C = 0.0;               // effective_mass and relativistic
  double effective_mass = 0.0;  // M
  double light_speed = 0.0;     // c
  double omega = 0.0;           // trap frequency
  double coupling() const;      // C for every environment type
  bool operator==(const EnvironmentConfig&) const = default;
};

struct ScheduleConfig {
  double dt = 0.0;
  double t_final = 0.0;
  long record_every = 1;
  bool operator==(const ScheduleConfig&) const = default;
};

struct ComparatorConfig {
  bool free = false;              // free Gaussian spreading (and free transmission)
  bool newton = false;            // classical motion of mass m (or M) in a ramp
  bool relativistic = false;      // classical relativistic motion in a ramp
  bool environment_free = false;  // second run with the environment removed
  bool operator==(const ComparatorConfig&) const = default;
};

struct OutputConfig {
  std::string dir = "out";
  std::string stem;
  bool operator==(const OutputConfig&) const = default;
};

// Sweep over the jet momentum p0. With hold_Cp0 each level is a Cp0 value and
// C = Cp0 / p0 is recomputed per point; otherwise each level is a fixed C.
// An empty value list is filled automatically: `points` geometrically spaced
// momenta from min_fraction times the smallest validity endpoint up to the
// largest, plus every level's endpoint.
struct SweepConfig {
  std::string parameter = "p0";
  std::vector<double> values;
  std::vector<double> levels;
  bool hold_Cp0 = true;
  long points = 6;
  double min_fraction = 0.1;
  bool operator==(const SweepConfig&) const = default;
};

struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::custom;
  std::string figure;
  GridConfig grid;
  StateConfig state;
  double mass = 0.0;
  PotentialConfig potential;
  EnvironmentConfig environment;
  ScheduleConfig schedule;
  std::optional<double> x_threshold;
  ComparatorConfig comparators;
  OutputConfig output;
  std::optional<SweepConfig> sweep;
  bool operator==(const ScenarioConfig&) const = default;
};

// Complete defaults for a named kind; custom returns an empty skeleton.
ScenarioConfig default_config(ScenarioKind kind);

// Throws ConfigError listing every problem found (unknown keys, missing
// required keys, malformed values, invalid combinations).
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);

// Fully explicit document; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ScenarioConfig& config);

// Consistency checks that do not need a grid: positive sizes, power-of-two
// grid, parameters required by the chosen potential and environment.
void check_config(const ScenarioConfig& config);

}  // namespace qre
