#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qre/grid.hpp"
#include "qre/synthesis.hpp"

namespace qre {

struct ObservableRecord {
  double t = 0.0;
  double mean_x = 0.0;
  double mean_p = 0.0;
  double var_x = 0.0;
  double var_p = 0.0;
  double energy = 0.0;
  double purity = 0.0;
  double trace = 0.0;
  std::optional<double> transmission;
  std::optional<double> mean_G;
  std::optional<double> mean_F;
};

struct TimeSeries {
  std::vector<ObservableRecord> records;
  // Free-form key/value metadata echoed into exported headers.
  std::vector<std::pair<std::string, std::string>> metadata;

  void append(const ObservableRecord& r);  // enforces strictly increasing t
};

struct MeasureOptions {
  std::span<const double> potential;  // U(x); empty means U = 0
  double mass = 1.0;
  std::span<const double> kinetic;    // optional T(p) replacing p^2 / 2m
  const TargetDynamics* targets = nullptr;
  std::optional<double> x_threshold;
};

// Moments, energy, purity and trace of a state given in both representations.
ObservableRecord measure(const DensityMatrix& position, const DensityMatrix& momentum,
                         double t, const MeasureOptions& opts);

// Convenience overload that transforms `position` itself.
ObservableRecord measure(const DensityMatrix& position, double t,
                         const MeasureOptions& opts);

struct EhrenfestResidual {
  double t = 0.0;
  double r_x = 0.0;  // |d<x>/dt - <G>|
  double r_p = 0.0;  // |d<p>/dt - <F>|
  bool endpoint = false;  // one-sided difference used
};

// Centered differences in the interior, second-order one-sided differences at
// the ends (flagged). Requires mean_G and mean_F in every record, at least 3
// records and a uniform recording interval.
std::vector<EhrenfestResidual> ehrenfest_residuals(const TimeSeries& series);

// Time derivative of a recorded column on a uniform interval (same stencils
// as above).
std::vector<double> finite_difference(std::span<const double> values, double interval);

}  // namespace qre
