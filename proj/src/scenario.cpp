#include "qre/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "qre/errors.hpp"
#include "qre/oracle.hpp"
#include "qre/units.hpp"

namespace qre {

namespace {

GridPtr grid_for(const ScenarioConfig& c) {
  try {
    return build_grid(c.grid.n_points, c.grid.x_min, c.grid.x_max);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("grid: ") + e.what());
  }
}

void fill_potential(const ScenarioConfig& c, const PhaseGrid& g, std::vector<double>& u,
                    std::vector<double>& du) {
  const auto x = g.x();
  u.assign(x.size(), 0.0);
  du.assign(x.size(), 0.0);
  const auto& p = c.potential;
  for (std::size_t i = 0; i < x.size(); ++i) {
    switch (p.type) {
      case PotentialKind::gaussian_barrier: {
        const double e = std::exp(-0.5 * x[i] * x[i]);
        u[i] = 2.0 * p.K0 * e;
        du[i] = -2.0 * p.K0 * x[i] * e;
        break;
      }
      case PotentialKind::harmonic:
        u[i] = 0.5 * c.mass * p.omega * p.omega * x[i] * x[i];
        du[i] = c.mass * p.omega * p.omega * x[i];
        break;
      case PotentialKind::ramp:
        u[i] = p.slope * x[i];
        du[i] = p.slope;
        break;
      case PotentialKind::none:
        break;
    }
  }
}

// Derivative the jets must supply with their net force sum_k f_k.
std::vector<double> jet_drive(const ScenarioConfig& c, const PhaseGrid& g,
                              const std::vector<double>& du) {
  if (c.environment.type == EnvironmentKind::jets) return du;
  std::vector<double> d(g.size());
  const double k = c.mass * c.environment.omega * c.environment.omega;
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = -k * g.x()[i];
  return d;
}

long step_count(const ScenarioConfig& c) {
  const long per_record = c.schedule.record_every;
  auto steps = static_cast<long>(std::ceil(c.schedule.t_final / c.schedule.dt - 1e-9));
  steps = std::max(steps, 0L);
  return (steps + per_record - 1) / per_record * per_record;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

ScenarioSetup base_setup(const ScenarioConfig& c) {
  check_config(c);
  ScenarioSetup s;
  s.grid = grid_for(c);
  s.mass = c.mass;
  fill_potential(c, *s.grid, s.potential, s.potential_derivative);
  s.targets.force.resize(s.grid->size());
  for (std::size_t i = 0; i < s.grid->size(); ++i)
    s.targets.force[i] = -s.potential_derivative[i];
  s.targets.velocity.resize(s.grid->size());
  for (std::size_t j = 0; j < s.grid->size(); ++j)
    s.targets.velocity[j] = s.grid->p()[j] / c.mass;
  s.state = {c.state.x0, c.state.p0_mean, c.state.sigma_x};
  s.schedule = {c.schedule.dt, step_count(c), c.schedule.record_every};
  s.x_threshold = c.x_threshold;
  return s;
}

double free_transmission(const ScenarioConfig& c, double t) {
  const double spread = units::hbar * t / (2.0 * c.mass * c.state.sigma_x);
  const double width = std::sqrt(c.state.sigma_x * c.state.sigma_x + spread * spread);
  const double centre = c.state.x0 + c.state.p0_mean * t / c.mass;
  return 0.5 * std::erfc((*c.x_threshold - centre) / (std::sqrt(2.0) * width));
}

}  // namespace

ScenarioSetup build_setup(const ScenarioConfig& c) {
  ScenarioSetup s = base_setup(c);
  const auto& e = c.environment;
  const auto& g = *s.grid;
  switch (e.type) {
    case EnvironmentKind::none:
      break;
    case EnvironmentKind::jets:
    case EnvironmentKind::trap: {
      const auto drive = jet_drive(c, g, s.potential_derivative);
      const JetEnvironment jets = jets_from_barrier(drive, e.coupling(), e.p0, g);
      if (jets.validity_margin < 1.0) {
        std::ostringstream msg;
        msg << "jet validity margin min p0^2/|beta| = " << jets.validity_margin
            << " is below 1 for p0=" << e.p0 << ", C=" << e.coupling()
            << " (semiclassical jet model does not hold)";
        throw InfeasibleError(msg.str());
      }
      s.validity_margin = jets.validity_margin;
      s.ops = jets.ops();
      for (std::size_t i = 0; i < g.size(); ++i) s.targets.force[i] += drive[i];
      break;
    }
    case EnvironmentKind::effective_mass:
      s.ops = {effective_mass_op(c.mass, e.effective_mass, e.C, g)};
      for (std::size_t j = 0; j < g.size(); ++j)
        s.targets.velocity[j] = g.p()[j] / e.effective_mass;
      break;
    case EnvironmentKind::relativistic:
      s.ops = {relativistic_op(c.mass, e.light_speed, e.C, g)};
      s.targets.velocity = relativistic_velocity(c.mass, e.light_speed, g);
      break;
  }
  return s;
}

ScenarioSetup environment_free_setup(const ScenarioConfig& c) {
  ScenarioSetup s = base_setup(c);
  const auto& e = c.environment;
  const auto& g = *s.grid;
  if (e.type == EnvironmentKind::effective_mass) {
    s.mass = e.effective_mass;
    for (std::size_t j = 0; j < g.size(); ++j) s.targets.velocity[j] = g.p()[j] / s.mass;
  } else if (e.type == EnvironmentKind::relativistic) {
    const double mc = c.mass * e.light_speed;
    s.kinetic.resize(g.size());
    for (std::size_t j = 0; j < g.size(); ++j)
      s.kinetic[j] = e.light_speed * std::sqrt(mc * mc + g.p()[j] * g.p()[j]);
    s.targets.velocity = relativistic_velocity(c.mass, e.light_speed, g);
  }
  return s;
}

ScenarioResult run_setup(const ScenarioSetup& s, const RunOptions& options) {
  const KernelSet kernels =
      s.kinetic.empty()
          ? build_kernels(s.grid, s.potential, s.mass, s.ops, s.schedule.dt)
          : build_kernels(s.grid, s.potential, s.kinetic, s.ops, s.schedule.dt);
  DensityMatrix rho0 = [&] {
    try {
      // The packet is prepared with the bare mass; only its width matters.
      return gaussian_density(s.grid, s.state, s.mass);
    } catch (const std::domain_error& e) {
      throw ConfigError(std::string("initial state: ") + e.what());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("initial state: ") + e.what());
    }
  }();

  MeasureOptions opts;
  opts.potential = s.potential;
  opts.mass = s.mass;
  opts.kinetic = s.kinetic;
  opts.targets = &s.targets;
  opts.x_threshold = s.x_threshold;

  ScenarioResult r;
  r.validity_margin = s.validity_margin;
  r.max_phase_increment = kernels.max_phase_increment;
  auto observer = [&](const Snapshot& snap) {
    r.series.append(measure(snap.position, snap.momentum, snap.t, opts));
  };
  PropagationResult out = propagate(rho0, kernels, s.schedule, observer, options.limits);
  r.diagnostics = std::move(out.diagnostics);
  if (options.audit_positivity) r.final_min_eigenvalue = out.final_state.min_eigenvalue();
  r.final_state = std::move(out.final_state);
  return r;
}

ScenarioResult run_scenario(const ScenarioConfig& c, const RunOptions& options) {
  const ScenarioSetup setup = build_setup(c);
  ScenarioResult r = run_setup(setup, options);
  r.series.metadata = run_metadata(c, setup);
  if (!options.comparators) return r;

  std::vector<double> times;
  for (const auto& rec : r.series.records) times.push_back(rec.t);
  const auto& e = c.environment;
  const double ramp_force = c.potential.type == PotentialKind::ramp ? -c.potential.slope : 0.0;

  if (c.comparators.free) {
    oracle::ComparatorParams p;
    p.mass = c.mass;
    p.sigma_x = c.state.sigma_x;
    auto s = oracle::analytic_comparators(oracle::ComparatorKind::free_gaussian_spread, p, times);
    r.comparators.push_back({"cmp_free_var_x", s.value});
    if (c.x_threshold) {
      Column col{"cmp_free_transmission", {}};
      for (double t : times) col.values.push_back(free_transmission(c, t));
      r.comparators.push_back(std::move(col));
    }
  }
  if (c.comparators.newton) {
    oracle::ComparatorParams p;
    p.mass = e.type == EnvironmentKind::effective_mass ? e.effective_mass : c.mass;
    p.x0 = c.state.x0;
    p.p0 = c.state.p0_mean;
    p.force = ramp_force;
    auto s = oracle::analytic_comparators(oracle::ComparatorKind::linear_potential_newton, p,
                                          times);
    r.comparators.push_back({"cmp_newton_mean_x", s.value});
    r.comparators.push_back({"cmp_newton_mean_p", s.secondary});
  }
  if (c.comparators.relativistic) {
    oracle::ComparatorParams p;
    p.mass = c.mass;
    p.p0 = c.state.p0_mean;
    p.force = ramp_force;
    p.light_speed = e.light_speed;
    auto s = oracle::analytic_comparators(oracle::ComparatorKind::classical_relativistic, p,
                                          times);
    r.comparators.push_back({"cmp_rel_velocity", s.value});
    r.comparators.push_back({"cmp_rel_mean_p", s.secondary});
  }
  if (c.comparators.environment_free) {
    RunOptions ref_opts = options;
    ref_opts.audit_positivity = false;
    const ScenarioResult ref = run_setup(environment_free_setup(c), ref_opts);
    Column mx{"ref_mean_x", {}}, mp{"ref_mean_p", {}}, vx{"ref_var_x", {}},
        pu{"ref_purity", {}}, tr{"ref_transmission", {}};
    for (const auto& rec : ref.series.records) {
      mx.values.push_back(rec.mean_x);
      mp.values.push_back(rec.mean_p);
      vx.values.push_back(rec.var_x);
      pu.values.push_back(rec.purity);
      if (rec.transmission) tr.values.push_back(*rec.transmission);
    }
    r.comparators.push_back(std::move(mx));
    r.comparators.push_back(std::move(mp));
    r.comparators.push_back(std::move(vx));
    r.comparators.push_back(std::move(pu));
    if (!tr.values.empty()) r.comparators.push_back(std::move(tr));
  }
  return r;
}

std::vector<std::pair<std::string, std::string>> run_metadata(const ScenarioConfig& c,
                                                              const ScenarioSetup& s) {
  std::vector<std::pair<std::string, std::string>> m;
  const auto& g = *s.grid;
  m.emplace_back("figure", c.figure.empty() ? "none" : c.figure);
  m.emplace_back("scenario", to_string(c.kind));
  m.emplace_back("units", "atomic units, hbar = m_e = 1, mu_B = 1/2");
  m.emplace_back("grid", "n=" + std::to_string(g.size()) + " x=[" + num(g.x_min()) + ", " +
                             num(g.x_max()) + ") dx=" + num(g.dx()) + " dp=" + num(g.dp()));
  m.emplace_back("initial_state", "Gaussian x0=" + num(s.state.x0) + " p0_mean=" +
                                      num(s.state.p0_mean) + " sigma_x=" + num(s.state.sigma_x));
  if (c.potential.type == PotentialKind::gaussian_barrier)
    m.emplace_back("p0_mean_rule", "p0_mean = sqrt(2 m K0) unless set explicitly");
  m.emplace_back("schedule", "dt=" + num(s.schedule.dt) + " steps=" +
                                 std::to_string(s.schedule.n_steps) + " record_every=" +
                                 std::to_string(s.schedule.record_every) + " t_final=" +
                                 num(s.schedule.dt * double(s.schedule.n_steps)));
  if (c.x_threshold)
    m.emplace_back("transmission", "population at x > " + num(*c.x_threshold) +
                                       "; read at the final time");
  const auto& e = c.environment;
  if (e.type != EnvironmentKind::none)
    m.emplace_back("environment", to_string(e.type) + " C=" + num(e.coupling()) +
                                      (e.p0 > 0.0 ? " p0=" + num(e.p0) + " Cp0=" + num(e.Cp0)
                                                  : std::string()));
  if (s.validity_margin) m.emplace_back("validity_margin", num(*s.validity_margin));
  return m;
}

std::optional<double> jet_margin(const ScenarioConfig& config, double p0, double Cp0) {
  const GridPtr g = grid_for(config);
  std::vector<double> u, du;
  fill_potential(config, *g, u, du);
  const auto drive = jet_drive(config, *g, du);
  try {
    return jets_from_barrier(drive, Cp0 / p0, p0, *g).validity_margin;
  } catch (const InfeasibleError&) {
    return std::nullopt;
  }
}

double margin_endpoint(const ScenarioConfig& config, double Cp0) {
  const GridPtr g = grid_for(config);
  std::vector<double> u, du;
  fill_potential(config, *g, u, du);
  const auto drive = jet_drive(config, *g, du);
  double max_du = 0.0;
  for (double d : drive) max_du = std::max(max_du, std::abs(d));
  if (max_du == 0.0) throw InfeasibleError("margin endpoint: the jets carry no force");
  // Beyond the discriminant bound no jets exist at all.
  double hi = 4.0 * Cp0 * Cp0 / (units::hbar * max_du);
  double lo = hi * 1e-6;
  auto margin = [&](double p0) {
    try {
      return jets_from_barrier(drive, Cp0 / p0, p0, *g).validity_margin;
    } catch (const InfeasibleError&) {
      return 0.0;
    }
  };
  if (margin(lo) < 1.0) throw InfeasibleError("margin endpoint: no feasible p0 found");
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (margin(mid) >= 1.0 ? lo : hi) = mid;
  }
  return lo;
}

ScenarioConfig sweep_point_config(const ScenarioConfig& config, double value, double level) {
  ScenarioConfig c = config;
  const SweepConfig s = config.sweep.value_or(SweepConfig{});
  auto& e = c.environment;
  const bool jets = e.type == EnvironmentKind::jets || e.type == EnvironmentKind::trap;
  std::string tag = s.parameter + "_" + num(value);
  if (s.parameter == "p0") {
    if (!jets) throw ConfigError("sweep over p0 needs a jets or trap environment");
    const double lvl = level > 0.0 ? level : (s.hold_Cp0 ? e.Cp0 : e.coupling());
    e.p0 = value;
    e.Cp0 = s.hold_Cp0 ? lvl : lvl * value;
    tag += (s.hold_Cp0 ? "_Cp0_" : "_C_") + num(lvl);
  } else if (s.parameter == "Cp0") {
    if (!jets) throw ConfigError("sweep over Cp0 needs a jets or trap environment");
    e.Cp0 = value;
  } else {
    if (jets)
      e.Cp0 = value * e.p0;
    else
      e.C = value;
  }
  c.output.stem = config.output.stem + "_" + tag;
  c.sweep.reset();
  return c;
}

std::vector<double> sweep_values(const ScenarioConfig& config) {
  if (!config.sweep) throw ConfigError("config has no [sweep] section");
  const auto& s = *config.sweep;
  if (!s.values.empty()) return s.values;
  if (s.parameter != "p0" || !s.hold_Cp0)
    throw ConfigError("sweep.values is required unless sweeping p0 at fixed Cp0");
  std::vector<double> ends;
  for (double lvl : s.levels) ends.push_back(margin_endpoint(config, lvl));
  const double hi = *std::max_element(ends.begin(), ends.end());
  const double lo = s.min_fraction * *std::min_element(ends.begin(), ends.end());
  std::vector<double> v;
  for (long k = 0; k < s.points; ++k)
    v.push_back(lo * std::pow(hi / lo, double(k) / double(s.points - 1)));
  v.back() = hi;
  v.insert(v.end(), ends.begin(), ends.end());
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end(),
                      [](double a, double b) { return std::abs(a - b) <= 1e-12 * b; }),
          v.end());
  return v;
}

SweepTable run_sweep(const ScenarioConfig& config, int workers, bool keep_results) {
  const std::vector<double> values = sweep_values(config);
  const auto& s = *config.sweep;
  SweepTable table;
  table.parameter = s.parameter;
  table.values = values;
  if (s.parameter == "p0") table.levels = s.levels;
  const std::vector<double> levels = table.levels.empty() ? std::vector<double>{0.0} : table.levels;
  for (double v : values)
    for (double lvl : levels) {
      SweepPoint pt;
      pt.value = v;
      pt.level = lvl;
      table.points.push_back(pt);
    }

  auto run_point = [&](SweepPoint& pt) {
    const ScenarioConfig c = sweep_point_config(config, pt.value, pt.level);
    const auto& e = c.environment;
    pt.p0 = e.p0;
    pt.Cp0 = e.Cp0;
    pt.C = e.coupling();
    try {
      RunOptions opts;
      opts.comparators = keep_results;
      ScenarioResult r = run_scenario(c, opts);
      pt.margin = r.validity_margin;
      pt.final_record = r.series.records.back();
      if (c.x_threshold) pt.free_transmission = free_transmission(c, pt.final_record->t);
      pt.status = "ok";
      if (keep_results) pt.result = std::move(r);
    } catch (const InfeasibleError& ex) {
      if (e.p0 > 0.0) pt.margin = jet_margin(c, e.p0, e.Cp0);
      pt.status = std::string("infeasible: ") + ex.what();
    } catch (const GuardTrip& ex) {
      pt.status = std::string("guard: ") + ex.what();
    } catch (const ConfigError& ex) {
      pt.status = std::string("config: ") + ex.what();
    }
  };

  const std::size_t n = table.points.size();
  const std::size_t k = std::clamp<std::size_t>(workers < 1 ? 1 : std::size_t(workers), 1, n);
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < k; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) run_point(table.points[i]);
    });
  for (auto& t : pool) t.join();

  if (std::none_of(table.points.begin(), table.points.end(),
                   [](const SweepPoint& p) { return p.status == "ok"; }))
    throw InfeasibleError("sweep: no point is feasible");
  return table;
}

FeasibilityReport validate(const ScenarioConfig& c) {
  FeasibilityReport rep;
  check_config(c);
  const GridPtr g = grid_for(c);
  {
    std::ostringstream o;
    o << "grid: n=" << g->size() << " dx=" << g->dx() << " dp=" << g->dp()
      << " |p| <= " << 0.5 * double(g->size()) * g->dp();
    rep.lines.push_back(o.str());
  }
  try {
    gaussian_density(g, {c.state.x0, c.state.p0_mean, c.state.sigma_x}, c.mass);
    rep.lines.push_back("initial state: inside the central 80% of the box");
  } catch (const std::exception& e) {
    throw ConfigError(std::string("initial state: ") + e.what());
  }
  const auto& e = c.environment;
  if (e.type == EnvironmentKind::jets || e.type == EnvironmentKind::trap) {
    const double end = margin_endpoint(c, e.Cp0);
    rep.lines.push_back("jets: C=" + num(e.coupling()) + " p0=" + num(e.p0) + " Cp0=" +
                        num(e.Cp0) + " largest feasible p0 at this Cp0 = " + num(end));
  }
  try {
    const ScenarioSetup s = build_setup(c);
    if (s.validity_margin) rep.lines.push_back("validity margin: " + num(*s.validity_margin));
    const KernelSet k =
        s.kinetic.empty() ? build_kernels(s.grid, s.potential, s.mass, s.ops, s.schedule.dt)
                          : build_kernels(s.grid, s.potential, s.kinetic, s.ops, s.schedule.dt);
    const GuardLimits lim;
    if (k.max_phase_increment > lim.phase_error)
      throw ConfigError("phase increment per substep " + num(k.max_phase_increment) +
                        " rad exceeds " + num(lim.phase_error) + "; reduce dt");
    rep.lines.push_back("phase increment per substep: " + num(k.max_phase_increment) +
                        (k.max_phase_increment > lim.phase_warning ? " rad (warning: above 0.1)"
                                                                   : " rad"));
    rep.lines.push_back("steps: " + std::to_string(s.schedule.n_steps));
  } catch (const InfeasibleError& ex) {
    rep.feasible = false;
    rep.lines.push_back(std::string("infeasible: ") + ex.what());
  }
  if (c.sweep) {
    const auto values = sweep_values(c);
    const auto& sw = *c.sweep;
    const std::vector<double> levels =
        sw.parameter == "p0" && !sw.levels.empty() ? sw.levels : std::vector<double>{0.0};
    for (double v : values)
      for (double lvl : levels) {
        const ScenarioConfig pc = sweep_point_config(c, v, lvl);
        std::string line = "sweep " + pc.output.stem + ": ";
        const auto& pe = pc.environment;
        if (pe.type == EnvironmentKind::jets || pe.type == EnvironmentKind::trap) {
          const auto m = jet_margin(pc, pe.p0, pe.Cp0);
          line += m ? "margin " + num(*m) + (*m >= 1.0 ? " ok" : " infeasible")
                    : std::string("negative discriminant, infeasible");
        } else {
          line += "ok";
        }
        rep.lines.push_back(line);
      }
  }
  return rep;
}

std::vector<std::string> oracle_families() {
  return {"free", "barrier", "tunneling", "trapping", "effective_mass", "relativistic"};
}

ScenarioConfig oracle_config(const std::string& family, std::size_t n_points) {
  ScenarioConfig c = default_config(ScenarioKind::custom);
  c.grid = {n_points, -10.0, 10.0};
  c.mass = 1.0;
  c.state = {-2.0, 1.0, 1.0};
  c.schedule = {2e-3, 0.2, 100};
  c.output.stem = "oracle_" + family;
  auto& e = c.environment;
  if (family == "free") {
  } else if (family == "barrier") {
    c.potential.type = PotentialKind::gaussian_barrier;
    c.potential.K0 = 0.5;
  } else if (family == "tunneling") {
    c.potential.type = PotentialKind::gaussian_barrier;
    c.potential.K0 = 0.5;
    e.type = EnvironmentKind::jets;
    e.p0 = 0.2;
    e.Cp0 = 0.5;
  } else if (family == "trapping") {
    e.type = EnvironmentKind::trap;
    e.omega = 0.5;
    e.p0 = 0.2;
    e.Cp0 = 0.8;
  } else if (family == "effective_mass") {
    c.potential.type = PotentialKind::ramp;
    c.potential.slope = 0.2;
    e.type = EnvironmentKind::effective_mass;
    e.effective_mass = 3.0;
    e.C = 1.0;
  } else if (family == "relativistic") {
    c.potential.type = PotentialKind::ramp;
    c.potential.slope = -0.5;
    e.type = EnvironmentKind::relativistic;
    e.light_speed = 2.0;
    e.C = 2.0;
  } else {
    throw ConfigError("unknown oracle family '" + family + "'");
  }
  return c;
}

OracleCase run_oracle_case(const std::string& family, std::size_t n_points, long steps) {
  ScenarioConfig c = oracle_config(family, n_points);
  c.schedule.t_final = c.schedule.dt * double(steps);
  c.schedule.record_every = std::max(steps, 1L);
  const ScenarioSetup s = build_setup(c);

  OracleCase out;
  out.family = family;
  out.n_points = n_points;
  out.dt = c.schedule.dt;
  out.steps = steps;

  const DensityMatrix rho0 = gaussian_density(s.grid, s.state, s.mass);
  const KernelSet k = build_kernels(s.grid, s.potential, s.mass, s.ops, s.schedule.dt);
  Schedule sched{s.schedule.dt, steps, std::max(steps, 1L)};
  // Both integrators share the periodic grid, so wrap-around is part of the
  // compared dynamics rather than an error.
  GuardLimits limits;
  limits.edge_density = 1.0;
  const PropagationResult split = propagate(rho0, k, sched, nullptr, limits);

  const auto kinetic = kinetic_energy(*s.grid, s.mass);
  const Eigen::MatrixXcd h = oracle::hamiltonian_matrix(s.potential, kinetic, *s.grid);
  std::vector<Eigen::MatrixXcd> ops;
  for (const auto& op : s.ops) ops.push_back(oracle::operator_matrix(op, *s.grid));
  const auto l = oracle::build_dense_liouvillian(h, ops, *s.grid);
  const double total = s.schedule.dt * double(steps);
  const long sub = oracle::rk4_substeps(l, total);
  const DensityMatrix dense = oracle::rk4_evolve(l, rho0, total / double(sub), sub);

  out.distance = hs_distance(split.final_state, dense);
  out.min_eigenvalue = split.final_state.min_eigenvalue();
  out.trace_drift = split.diagnostics.max_trace_drift;
  out.hermiticity_defect = split.diagnostics.max_hermiticity_defect;
  out.max_purity = split.diagnostics.max_purity;
  return out;
}

}  // namespace qre
