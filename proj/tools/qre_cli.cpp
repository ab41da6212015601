// Command-line front end: run, sweep, validate, oracle-check.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "qre/config.hpp"
#include "qre/errors.hpp"
#include "qre/export.hpp"
#include "qre/scenario.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kInfeasible = 3;
constexpr int kGuardTrip = 4;

struct Overrides {
  std::string config_path;
  std::optional<std::string> out;
  std::optional<double> dt;
  std::optional<std::size_t> grid_n;
  int workers = 1;
};

qre::ScenarioConfig load(const Overrides& o) {
  qre::ScenarioConfig c = qre::load_config(o.config_path);
  if (o.out) c.output.dir = *o.out;
  if (o.dt) c.schedule.dt = *o.dt;
  if (o.grid_n) c.grid.n_points = *o.grid_n;
  qre::check_config(c);
  return c;
}

void print_summary(const qre::ScenarioResult& r) {
  const auto& last = r.series.records.back();
  std::printf("t=%.6g <x>=%.6g <p>=%.6g var_x=%.6g purity=%.6g trace=%.12g", last.t,
              last.mean_x, last.mean_p, last.var_x, last.purity, last.trace);
  if (last.transmission) std::printf(" transmission=%.6g", *last.transmission);
  std::printf("\n");
  for (const auto& w : r.diagnostics.warnings) std::printf("warning: %s\n", w.c_str());
}

int cmd_run(const Overrides& o) {
  const auto c = load(o);
  qre::RunOptions opts;
  opts.audit_positivity = true;
  const auto r = qre::run_scenario(c, opts);
  const auto path = qre::emit_outputs(c, r, c.output.dir);
  print_summary(r);
  std::printf("wrote %s\n", path.c_str());
  return kOk;
}

int cmd_sweep(const Overrides& o) {
  const auto c = load(o);
  if (!c.sweep) throw qre::ConfigError("config has no [sweep] section");
  const auto table = qre::run_sweep(c, o.workers);
  const auto path = qre::emit_sweep(c, table, c.output.dir);
  for (const auto& p : table.points) {
    std::printf("%s=%.6g p0=%.6g Cp0=%.6g C=%.6g ", table.parameter.c_str(), p.value, p.p0,
                p.Cp0, p.C);
    if (p.final_record)
      std::printf("purity=%.6g transmission=%s\n", p.final_record->purity,
                  p.final_record->transmission
                      ? std::to_string(*p.final_record->transmission).c_str()
                      : "-");
    else
      std::printf("%s\n", p.status.c_str());
  }
  std::printf("wrote %s\n", path.c_str());
  return kOk;
}

int cmd_validate(const Overrides& o) {
  const auto c = load(o);
  const auto rep = qre::validate(c);
  for (const auto& line : rep.lines) std::printf("%s\n", line.c_str());
  std::printf("%s\n", rep.feasible ? "feasible" : "NOT feasible");
  return rep.feasible ? kOk : kInfeasible;
}

int cmd_oracle(const Overrides& o) {
  const std::size_t n = o.grid_n.value_or(32);
  const double tol = 1e-6;
  bool ok = true;
  for (const auto& family : qre::oracle_families()) {
    const auto oc = qre::run_oracle_case(family, n);
    const bool pass = oc.distance <= tol && oc.min_eigenvalue >= -1e-8;
    ok = ok && pass;
    std::printf("%-15s n=%zu dt=%g steps=%ld distance=%.3e min_eig=%.3e %s\n", family.c_str(),
                oc.n_points, oc.dt, oc.steps, oc.distance, oc.min_eigenvalue,
                pass ? "PASS" : "FAIL");
  }
  return ok ? kOk : kGuardTrip;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Open-system wavepacket simulator with engineered environments"};
  app.require_subcommand(1);
  Overrides o;

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* opt = sub->add_option("--config", o.config_path, "experiment config (TOML subset)");
    if (needs_config) opt->required()->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--dt", o.dt, "time step override")->check(CLI::PositiveNumber);
    sub->add_option("--grid-n", o.grid_n, "grid size override (power of two)");
    sub->add_option("--workers", o.workers, "sweep worker threads")->check(CLI::PositiveNumber);
  };
  auto* run = app.add_subcommand("run", "run one scenario and write CSV + gnuplot script");
  auto* sweep = app.add_subcommand("sweep", "run a parameter sweep and write a summary table");
  auto* validate = app.add_subcommand("validate", "feasibility checks only");
  auto* oracle = app.add_subcommand("oracle-check", "small-grid check against the dense integrator");
  add_common(run, true);
  add_common(sweep, true);
  add_common(validate, true);
  add_common(oracle, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*run) return cmd_run(o);
    if (*sweep) return cmd_sweep(o);
    if (*validate) return cmd_validate(o);
    if (*oracle) return cmd_oracle(o);
  } catch (const qre::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const qre::InfeasibleError& e) {
    std::fprintf(stderr, "infeasible: %s\n", e.what());
    return kInfeasible;
  } catch (const qre::GuardTrip& e) {
    std::fprintf(stderr, "guard tripped at step %ld (t=%g): %s\n", e.step(), e.time(), e.what());
    return kGuardTrip;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  }
  return kConfigError;
}
