#pragma once

#include <string>
#include <vector>

#include "qre/config.hpp"
#include "qre/scenario.hpp"

namespace qre {

// Fixed leading columns of every time-series file.
const std::vector<std::string>& series_columns();

// CSV text of a run: '#' header block (metadata, diagnostics, the full config)
// followed by one header row and one row per record. Absent optional values
// are empty cells.
std::string series_csv(const ScenarioConfig& config, const ScenarioResult& result);

// Gnuplot script plotting the panels of the run from `csv_name`.
std::string series_gnuplot(const ScenarioConfig& config, const ScenarioResult& result,
                           const std::string& csv_name);

std::string sweep_csv(const ScenarioConfig& config, const SweepTable& table);
std::string sweep_gnuplot(const ScenarioConfig& config, const SweepTable& table,
                          const std::string& csv_name);

// Writes <dir>/<stem>.csv and <dir>/<stem>.gp, creating `dir` if needed.
// Returns the CSV path. Throws ConfigError when the files cannot be written.
std::string emit_outputs(const ScenarioConfig& config, const ScenarioResult& result,
                         const std::string& dir);
std::string emit_sweep(const ScenarioConfig& config, const SweepTable& table,
                       const std::string& dir);

}  // namespace qre
