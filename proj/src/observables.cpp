#include "qre/observables.hpp"

#include <cmath>
#include <stdexcept>

namespace qre {

void TimeSeries::append(const ObservableRecord& r) {
  if (!records.empty() && !(r.t > records.back().t))
    throw std::invalid_argument("time series: times must be strictly increasing");
  records.push_back(r);
}

namespace {

struct Moments {
  double norm = 0.0, mean = 0.0, var = 0.0;
};

Moments moments(const std::vector<double>& density, std::span<const double> axis, double w) {
  Moments m;
  for (std::size_t i = 0; i < density.size(); ++i) {
    m.norm += density[i] * w;
    m.mean += axis[i] * density[i] * w;
  }
  m.mean /= m.norm;
  for (std::size_t i = 0; i < density.size(); ++i) {
    const double d = axis[i] - m.mean;
    m.var += d * d * density[i] * w;
  }
  m.var /= m.norm;
  return m;
}

double expectation(const std::vector<double>& density, std::span<const double> f, double w) {
  double acc = 0.0;
  for (std::size_t i = 0; i < density.size(); ++i) acc += f[i] * density[i] * w;
  return acc;
}

}  // namespace

ObservableRecord measure(const DensityMatrix& position, const DensityMatrix& momentum,
                         double t, const MeasureOptions& opts) {
  if (position.representation() != Representation::position ||
      momentum.representation() != Representation::momentum)
    throw std::invalid_argument("measure: representations swapped");
  const auto& g = position.grid();
  const auto rx = position.diagonal();
  const auto rp = momentum.diagonal();

  ObservableRecord r;
  r.t = t;
  const auto mx = moments(rx, g.x(), g.dx());
  const auto mp = moments(rp, g.p(), g.dp());
  r.mean_x = mx.mean;
  r.var_x = mx.var;
  r.mean_p = mp.mean;
  r.var_p = mp.var;
  r.trace = mx.norm;
  r.purity = position.purity();

  double kinetic = 0.0;
  if (!opts.kinetic.empty()) {
    kinetic = expectation(rp, opts.kinetic, g.dp());
  } else {
    for (std::size_t j = 0; j < rp.size(); ++j)
      kinetic += g.p()[j] * g.p()[j] / (2.0 * opts.mass) * rp[j] * g.dp();
  }
  const double potential = opts.potential.empty() ? 0.0 : expectation(rx, opts.potential, g.dx());
  r.energy = kinetic + potential;

  if (opts.x_threshold) {
    double acc = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i)
      if (g.x()[i] > *opts.x_threshold) acc += rx[i] * g.dx();
    r.transmission = acc;
  }
  if (opts.targets) {
    r.mean_G = expectation(rp, opts.targets->velocity, g.dp());
    r.mean_F = expectation(rx, opts.targets->force, g.dx());
  }
  return r;
}

ObservableRecord measure(const DensityMatrix& position, double t, const MeasureOptions& opts) {
  return measure(position, to_momentum_rep(position), t, opts);
}

std::vector<double> finite_difference(std::span<const double> v, double h) {
  const std::size_t n = v.size();
  if (n < 3) throw std::invalid_argument("finite_difference: need at least 3 records");
  std::vector<double> d(n);
  d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
  d[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
  for (std::size_t k = 1; k + 1 < n; ++k) d[k] = (v[k + 1] - v[k - 1]) / (2.0 * h);
  return d;
}

std::vector<EhrenfestResidual> ehrenfest_residuals(const TimeSeries& series) {
  const auto& rec = series.records;
  if (rec.size() < 3) throw std::invalid_argument("ehrenfest_residuals: fewer than 3 records");
  const double h = rec[1].t - rec[0].t;
  for (std::size_t k = 1; k < rec.size(); ++k) {
    if (std::abs((rec[k].t - rec[k - 1].t) - h) > 1e-9 * std::abs(h))
      throw std::invalid_argument("ehrenfest_residuals: recording interval is not uniform");
    if (!rec[k].mean_G || !rec[k].mean_F || !rec[0].mean_G || !rec[0].mean_F)
      throw std::invalid_argument("ehrenfest_residuals: records lack mean_G/mean_F");
  }
  std::vector<double> xs, ps;
  for (const auto& r : rec) {
    xs.push_back(r.mean_x);
    ps.push_back(r.mean_p);
  }
  const auto dx = finite_difference(xs, h);
  const auto dp = finite_difference(ps, h);
  std::vector<EhrenfestResidual> out(rec.size());
  for (std::size_t k = 0; k < rec.size(); ++k) {
    out[k].t = rec[k].t;
    out[k].r_x = std::abs(dx[k] - *rec[k].mean_G);
    out[k].r_p = std::abs(dp[k] - *rec[k].mean_F);
    out[k].endpoint = (k == 0 || k + 1 == rec.size());
  }
  return out;
}

}  // namespace qre
