#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qre/errors.hpp"
#include "qre/export.hpp"
#include "qre/oracle.hpp"
#include "qre/scenario.hpp"

using namespace qre;

namespace {

// Tunneling-style problem small enough for unit tests.
ScenarioConfig small_tunneling() {
  ScenarioConfig c = default_config(ScenarioKind::custom);
  c.figure = "2";
  c.grid = {64, -12.0, 12.0};
  c.mass = 1.0;
  c.state = {-3.0, 1.0, 1.0};
  c.potential.type = PotentialKind::gaussian_barrier;
  c.potential.K0 = 0.3;
  c.environment.type = EnvironmentKind::jets;
  c.environment.p0 = 0.2;
  c.environment.Cp0 = 0.5;
  c.schedule = {2e-3, 0.4, 20};
  c.x_threshold = 0.0;
  c.comparators.free = true;
  c.output.stem = "small";
  return c;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("setups of the figure scenarios") {
  const auto t = build_setup(default_config(ScenarioKind::tunneling));
  REQUIRE(t.validity_margin);
  CHECK(*t.validity_margin >= 1.0);
  CHECK(t.ops.size() == 2);
  // jets cancel the barrier: F = 0 everywhere
  for (double f : t.targets.force) CHECK(std::abs(f) < 1e-15);

  const auto tr = build_setup(default_config(ScenarioKind::trapping));
  for (double u : tr.potential) CHECK(u == 0.0);
  for (std::size_t i = 0; i < tr.grid->size(); ++i)
    CHECK(tr.targets.force[i] == doctest::Approx(-1837.0 * 1e-4 * tr.grid->x()[i]));

  const auto em = environment_free_setup(default_config(ScenarioKind::effective_mass));
  CHECK(em.mass == 18370.0);
  CHECK(em.ops.empty());
  const auto rel = environment_free_setup(default_config(ScenarioKind::relativistic));
  REQUIRE(rel.kinetic.size() == rel.grid->size());
  CHECK(rel.kinetic[0] == doctest::Approx(100.0));
}

TEST_CASE("infeasible and malformed scenarios are rejected") {
  auto c = small_tunneling();
  c.environment.p0 = 2.5;  // slower jet reversed, margin below 1
  CHECK_THROWS_AS(build_setup(c), InfeasibleError);
  CHECK(*jet_margin(c, 2.5, 0.5) < 1.0);
  c = small_tunneling();
  c.environment.p0 = 5.0;  // negative discriminant
  CHECK_THROWS_AS(build_setup(c), InfeasibleError);
  CHECK(!jet_margin(c, 5.0, 0.5));
  c = small_tunneling();
  c.state.x0 = 11.0;
  CHECK_THROWS_AS(run_scenario(c), ConfigError);
  c = small_tunneling();
  c.grid.n_points = 48;
  CHECK_THROWS_AS(build_setup(c), ConfigError);
}

TEST_CASE("margin endpoint is where the margin reaches 1") {
  const auto c = small_tunneling();
  const double end = margin_endpoint(c, 0.5);
  CHECK(*jet_margin(c, end, 0.5) >= 1.0);
  CHECK(*jet_margin(c, end * (1.0 + 1e-9), 0.5) < 1.0);
  CHECK(*jet_margin(c, end, 0.5) == doctest::Approx(1.0).epsilon(1e-9));
  // smaller p0 at fixed Cp0 means a larger margin
  CHECK(*jet_margin(c, 0.5 * end, 0.5) > *jet_margin(c, end, 0.5));
}

TEST_CASE("effective mass M = m reduces to the bare run") {
  ScenarioConfig c = default_config(ScenarioKind::effective_mass);
  c.grid = {64, -10.0, 10.0};
  c.mass = 1.0;
  c.state = {0.0, 0.5, 1.0};
  c.potential.slope = 0.05;
  c.environment.effective_mass = 1.0;
  c.environment.C = 0.7;
  c.schedule = {5e-3, 1.0, 20};
  const auto with = run_scenario(c);
  const auto bare = run_setup(environment_free_setup(c));
  REQUIRE(with.series.records.size() == bare.series.records.size());
  for (std::size_t k = 0; k < bare.series.records.size(); ++k) {
    CHECK(std::abs(with.series.records[k].mean_x - bare.series.records[k].mean_x) < 1e-12);
    CHECK(std::abs(with.series.records[k].purity - bare.series.records[k].purity) < 1e-12);
  }
}

TEST_CASE("barrier without environment matches the dense unitary run") {
  ScenarioConfig c = oracle_config("barrier", 32);
  c.x_threshold = 0.0;
  c.schedule = {2e-3, 3.0, 100};
  const auto setup = build_setup(c);
  RunOptions opts;
  opts.limits.edge_density = 1.0;  // the dense run shares the periodic box
  const auto split = run_setup(setup, opts);

  const auto kinetic = kinetic_energy(*setup.grid, setup.mass);
  const auto l = oracle::build_dense_liouvillian(
      oracle::hamiltonian_matrix(setup.potential, kinetic, *setup.grid), {}, *setup.grid);
  const double t = split.series.records.back().t;
  const long sub = oracle::rk4_substeps(l, t);
  const auto dense =
      oracle::rk4_evolve(l, gaussian_density(setup.grid, setup.state, setup.mass), t / sub, sub);
  double trans = 0.0;
  for (std::size_t i = 0; i < 32; ++i)
    if (setup.grid->x()[i] > 0.0) trans += dense(i, i).real() * setup.grid->dx();
  const double got = *split.series.records.back().transmission;
  CHECK(got > 0.05);
  CHECK(got < 0.95);
  CHECK(got == doctest::Approx(trans).epsilon(1e-5));
}

TEST_CASE("comparator columns are aligned with the records") {
  auto c = small_tunneling();
  c.comparators.environment_free = true;
  const auto r = run_scenario(c);
  const std::size_t n = r.series.records.size();
  CHECK(n == 11);
  std::vector<std::string> names;
  for (const auto& col : r.comparators) {
    names.push_back(col.name);
    CHECK(col.values.size() == n);
  }
  CHECK(names == std::vector<std::string>{"cmp_free_var_x", "cmp_free_transmission", "ref_mean_x",
                                          "ref_mean_p", "ref_var_x", "ref_purity",
                                          "ref_transmission"});
  CHECK(r.comparators[0].values[0] == doctest::Approx(1.0));
}

TEST_CASE("identical configs give bit-identical files") {
  const auto c = small_tunneling();
  const auto a = series_csv(c, run_scenario(c));
  const auto b = series_csv(c, run_scenario(c));
  CHECK(a == b);
}

TEST_CASE("series file layout") {
  const auto c = small_tunneling();
  const auto r = run_scenario(c);
  const auto csv = series_csv(c, r);
  CHECK(csv.find("# figure: 2\n") != std::string::npos);
  CHECK(csv.find("# config:\n") != std::string::npos);
  CHECK(csv.find("#   K0 = 0.3\n") != std::string::npos);
  CHECK(csv.find("# validity_margin: ") != std::string::npos);
  CHECK(csv.find("\nt,mean_x,mean_p,var_x,var_p,energy,purity,trace,transmission,mean_G,mean_F,"
                 "cmp_free_var_x,cmp_free_transmission\n") != std::string::npos);
  std::istringstream in(csv);
  std::string line;
  std::size_t rows = 0;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#') ++rows;
  CHECK(rows == 1 + r.series.records.size());

  const auto gp = series_gnuplot(c, r, "small.csv");
  CHECK(gp.find("figure 2") != std::string::npos);
  CHECK(gp.find("'small.csv' using 1:9") != std::string::npos);  // transmission

  const auto dir = std::filesystem::temp_directory_path() / "qre_test_export";
  std::filesystem::remove_all(dir);
  const auto path = emit_outputs(c, r, dir.string());
  CHECK(slurp(path) == csv);
  CHECK(std::filesystem::exists(dir / "small.gp"));
  std::filesystem::remove_all(dir);
  CHECK_THROWS_AS(emit_outputs(c, r, "/proc/qre_cannot_write"), ConfigError);
}

TEST_CASE("sweep of length 1 reduces to a single run") {
  auto c = small_tunneling();
  SweepConfig s;
  s.values = {0.2};
  s.levels = {0.5};
  c.sweep = s;
  const auto table = run_sweep(c, 1, true);
  REQUIRE(table.points.size() == 1);
  const auto& pt = table.points[0];
  CHECK(pt.status == "ok");
  const auto point_cfg = sweep_point_config(c, 0.2, 0.5);
  CHECK(point_cfg.output.stem == "small_p0_0.2_Cp0_0.5");
  const auto single = run_scenario(point_cfg);
  CHECK(series_csv(point_cfg, *pt.result) == series_csv(point_cfg, single));
}

TEST_CASE("sweeps are independent of the worker count") {
  auto c = small_tunneling();
  SweepConfig s;
  s.values = {0.12, 0.16, 0.2, 3.0};  // the last one is infeasible
  s.levels = {0.5, 0.6};
  c.sweep = s;
  const auto serial = run_sweep(c, 1);
  const auto parallel = run_sweep(c, 3);
  REQUIRE(serial.points.size() == 8);
  for (std::size_t k = 0; k < serial.points.size(); ++k) {
    CHECK(serial.points[k].status == parallel.points[k].status);
    if (serial.points[k].final_record) {
      CHECK(serial.points[k].final_record->purity == parallel.points[k].final_record->purity);
      CHECK(serial.points[k].final_record->transmission ==
            parallel.points[k].final_record->transmission);
    }
  }
  CHECK(serial.points[6].status.rfind("infeasible", 0) == 0);
  CHECK(serial.points[7].status.rfind("infeasible", 0) == 0);
  CHECK(sweep_csv(c, serial) == sweep_csv(c, parallel));
  const auto csv = sweep_csv(c, serial);
  CHECK(csv.find("# figure: 2") != std::string::npos);
  CHECK(csv.find(",infeasible") != std::string::npos);

  c.sweep->values = {3.0, 3.5};
  CHECK_THROWS_AS(run_sweep(c, 2), InfeasibleError);
}

TEST_CASE("automatic p0 values end at the margin endpoints") {
  auto c = small_tunneling();
  SweepConfig s;
  s.levels = {0.5, 0.6};
  s.points = 4;
  s.min_fraction = 0.2;
  c.sweep = s;
  const auto v = sweep_values(c);
  const double e1 = margin_endpoint(c, 0.5), e2 = margin_endpoint(c, 0.6);
  CHECK(v.front() == doctest::Approx(0.2 * e1));
  CHECK(v.back() == doctest::Approx(e2));
  CHECK(std::find(v.begin(), v.end(), e1) != v.end());
  for (std::size_t k = 1; k < v.size(); ++k) CHECK(v[k] > v[k - 1]);
}

TEST_CASE("validate reports without propagating") {
  const auto rep = validate(default_config(ScenarioKind::tunneling));
  CHECK(rep.feasible);
  bool saw_margin = false;
  for (const auto& l : rep.lines) saw_margin = saw_margin || l.rfind("validity margin", 0) == 0;
  CHECK(saw_margin);

  auto c = small_tunneling();
  c.environment.p0 = 2.5;
  CHECK(!validate(c).feasible);
  c = small_tunneling();
  c.schedule.dt = 0.1;
  CHECK_THROWS_AS(validate(c), ConfigError);
}

TEST_CASE("oracle cases agree at small N") {
  for (const auto& family : oracle_families()) {
    const auto oc = run_oracle_case(family, 16, 50);
    CHECK(oc.distance < 1e-6);
    CHECK(oc.min_eigenvalue > -1e-8);
    CHECK(oc.trace_drift < 1e-10);
  }
  CHECK_THROWS_AS(oracle_config("nope"), ConfigError);
}
