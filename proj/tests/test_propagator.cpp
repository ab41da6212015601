#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "qre/errors.hpp"
#include "qre/oracle.hpp"
#include "qre/propagator.hpp"
#include "qre/synthesis.hpp"

using namespace qre;

namespace {

double var_x(const DensityMatrix& rho) {
  const auto x = rho.grid().x();
  double m1 = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    const double w = rho(i, i).real() * rho.weight();
    m1 += x[i] * w;
    m2 += x[i] * x[i] * w;
  }
  return m2 - m1 * m1;
}

LindbladOp wavy_op(const PhaseGrid& g, double scale) {
  std::vector<double> f(g.size()), r(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    f[i] = scale * std::sin(g.x()[i]);
    r[i] = 0.6 + 0.2 * std::cos(0.5 * g.x()[i]);
  }
  return build_position_lindblad(f, r, g);
}

DensityMatrix evolve(const DensityMatrix& rho0, const KernelSet& k, long steps) {
  DensityMatrix rho = rho0;
  for (long s = 0; s < steps; ++s) strang_step_inplace(rho, k);
  return rho;
}

}  // namespace

TEST_CASE("empty generator gives unit kernels") {
  auto g = build_grid(16, -4.0, 4.0);
  const std::vector<double> u(16, 0.0);
  const auto k = build_kernels(g, u, 1.0, {}, 0.1);
  for (const auto& v : k.position_kernel) CHECK(v == cplx(1.0, 0.0));
  CHECK(k.dt_x == 0.05);
  CHECK(k.dt_p == 0.1);
}

TEST_CASE("kernel structure") {
  auto g = build_grid(32, -5.0, 5.0);
  std::vector<double> u(32);
  for (std::size_t i = 0; i < 32; ++i) u[i] = 0.2 * g->x()[i] * g->x()[i];
  const auto k = build_kernels(g, u, 1.3, {wavy_op(*g, 0.7), effective_mass_op(1.3, 2.0, 0.9, *g)}, 0.02);
  for (const auto* kern : {&k.position_kernel, &k.momentum_kernel})
    for (std::size_t i = 0; i < 32; ++i) {
      CHECK(std::abs((*kern)[i * 32 + i]) == doctest::Approx(1.0).epsilon(1e-15));
      for (std::size_t j = 0; j < 32; ++j) {
        CHECK(std::abs((*kern)[i * 32 + j]) <= 1.0 + 1e-15);
        CHECK(std::abs((*kern)[i * 32 + j] - std::conj((*kern)[j * 32 + i])) < 1e-15);
      }
    }
  CHECK(k.max_phase_increment > 0.0);
  CHECK_THROWS_AS(build_kernels(g, u, 1.0, {}, 0.0), std::invalid_argument);
  const std::vector<double> short_u(8, 0.0);
  CHECK_THROWS_AS(build_kernels(g, short_u, 1.0, {}, 0.1), std::invalid_argument);
}

TEST_CASE("free gaussian spreading") {
  auto g = build_grid(256, -40.0, 40.0);
  const std::vector<double> u(256, 0.0);
  const double sigma = 1.0, dt = 0.05;
  const auto k = build_kernels(g, u, 1.0, {}, dt);
  DensityMatrix rho = gaussian_density(g, {-2.0, 0.5, sigma}, 1.0);
  for (int rec = 1; rec <= 10; ++rec) {
    rho = evolve(rho, k, 20);
    const double t = rec * 20 * dt;
    const double expected = sigma * sigma + std::pow(t / (2.0 * sigma), 2);
    CHECK(std::abs(var_x(rho) - expected) < 1e-6);
    CHECK(rho.purity() == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("trace and hermiticity per step") {
  auto g = build_grid(64, -10.0, 10.0);
  std::vector<double> u(64);
  for (std::size_t i = 0; i < 64; ++i) u[i] = 0.5 * std::exp(-0.5 * g->x()[i] * g->x()[i]);
  const auto k = build_kernels(g, u, 1.0, {wavy_op(*g, 0.3), relativistic_op(1.0, 2.0, 1.5, *g)}, 0.01);
  DensityMatrix rho = gaussian_density(g, {-1.0, 1.0, 1.0}, 1.0);
  double prev = rho.trace();
  for (int s = 0; s < 50; ++s) {
    strang_step_inplace(rho, k);
    CHECK(std::abs(rho.trace() - prev) <= 1e-12);
    prev = rho.trace();
    CHECK(rho.hermiticity_defect() < 1e-12);
    CHECK(rho.purity() <= 1.0 + 1e-10);
  }
  CHECK(rho.purity() < 0.999);
  CHECK(rho.min_eigenvalue() > -1e-8);
  CHECK_THROWS_AS(strang_step(to_momentum_rep(rho), k), std::invalid_argument);
}

TEST_CASE("position-only generator is exact for any step") {
  auto g = build_grid(16, -4.0, 4.0);
  std::vector<double> u(16);
  for (std::size_t i = 0; i < 16; ++i) u[i] = 0.3 * g->x()[i];
  const auto op = wavy_op(*g, 0.8);
  const double inf = std::numeric_limits<double>::infinity();
  const std::vector<double> zero_t(16, 0.0);
  const auto h = oracle::hamiltonian_matrix(u, zero_t, *g);
  const auto l = oracle::build_dense_liouvillian(h, {oracle::operator_matrix(op, *g)}, *g);
  const auto rho0 = gaussian_density(g, {0.2, 0.4, 0.5}, 1.0);
  for (double dt : {0.05, 0.5, 2.0}) {
    const auto k = build_kernels(g, u, inf, {op}, dt);
    const auto split = strang_step(rho0, k);
    const long sub = 8 * oracle::rk4_substeps(l, dt);
    const auto dense = oracle::rk4_evolve(l, rho0, dt / double(sub), sub);
    CHECK(hs_distance(split, dense) < 1e-10);
  }
}

TEST_CASE("strang self-convergence is second order") {
  auto g = build_grid(32, -8.0, 8.0);
  std::vector<double> u(32);
  for (std::size_t i = 0; i < 32; ++i) u[i] = 0.4 * std::exp(-0.5 * g->x()[i] * g->x()[i]);
  const std::vector<LindbladOp> ops = {wavy_op(*g, 0.5), effective_mass_op(1.0, 2.5, 1.2, *g)};
  const auto rho0 = gaussian_density(g, {-1.0, 0.8, 0.8}, 1.0);
  const double t = 0.8;
  std::vector<DensityMatrix> runs;
  for (long steps : {40, 80, 160}) runs.push_back(evolve(rho0, build_kernels(g, u, 1.0, ops, t / steps), steps));
  const double order = std::log2(hs_distance(runs[0], runs[1]) / hs_distance(runs[1], runs[2]));
  CHECK(order == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("propagate records and guards") {
  auto g = build_grid(64, -20.0, 20.0);  // kinetic range 12.6
  const std::vector<double> u(64, 0.0);
  const auto rho0 = gaussian_density(g, {0.0, 0.0, 1.0}, 1.0);
  const auto k = build_kernels(g, u, 1.0, {}, 0.005);

  std::vector<double> times;
  auto obs = [&](const Snapshot& s) { times.push_back(s.t); };
  propagate(rho0, k, {0.005, 0, 1}, obs);
  CHECK(times.size() == 1);
  CHECK(times[0] == 0.0);

  times.clear();
  const auto res = propagate(rho0, k, {0.005, 25, 10}, obs);
  REQUIRE(times.size() == 4);  // 0, 10, 20, 25
  CHECK(times[3] == doctest::Approx(0.125));
  CHECK(res.diagnostics.max_trace_drift < 1e-12);
  CHECK(res.diagnostics.warnings.empty());

  CHECK_THROWS_AS(propagate(rho0, k, {0.01, 5, 1}, obs), std::invalid_argument);
  CHECK_THROWS_AS(propagate(rho0, k, {0.005, 5, 0}, obs), ConfigError);

  // a moving packet reaches the edge band
  const auto mover = gaussian_density(g, {0.0, 1.5, 1.0}, 1.0);
  CHECK_NOTHROW(propagate(mover, k, {0.005, 400, 50}, nullptr));
  CHECK_THROWS_AS(propagate(mover, k, {0.005, 2000, 50}, nullptr), GuardTrip);

  // oversize steps are refused, moderate ones warned about
  const auto coarse = build_kernels(g, u, 1.0, {}, 0.05);
  CHECK(coarse.max_phase_increment > 0.5);
  CHECK_THROWS_AS(propagate(rho0, coarse, {0.05, 1, 1}, nullptr), ConfigError);
  const auto mid = build_kernels(g, u, 1.0, {}, 0.01);
  CHECK(mid.max_phase_increment > 0.1);
  CHECK(propagate(rho0, mid, {0.01, 2, 1}, nullptr).diagnostics.warnings.size() == 1);
}
