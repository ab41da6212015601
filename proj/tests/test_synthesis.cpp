#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "qre/errors.hpp"
#include "qre/propagator.hpp"
#include "qre/synthesis.hpp"

using namespace qre;

namespace {

std::vector<double> barrier_derivative(const PhaseGrid& g, double k0) {
  std::vector<double> du(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.x()[i];
    du[i] = -2.0 * k0 * x * std::exp(-0.5 * x * x);
  }
  return du;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// sin(x) integrated from the left node, every node
double phase_error(std::size_t n, bool corrected) {
  auto g = build_grid(n, -3.0, 3.0);
  std::vector<double> num(n), den(n, 1.0), exact(n);
  for (std::size_t i = 0; i < n; ++i) {
    num[i] = std::sin(g->x()[i]);
    exact[i] = std::cos(g->x()[0]) - std::cos(g->x()[i]);
  }
  const auto th = corrected ? cumulative_phase(num, den, *g, Representation::position)
                            : cumulative_phase_trapezoid(num, den, *g, Representation::position);
  return max_abs_diff(th, exact);
}

}  // namespace

TEST_CASE("cumulative phase of trivial integrands") {
  auto g = build_grid(64, -5.0, 5.0);
  std::vector<double> zero(64, 0.0), one(64, 1.0), two(64, 2.0), num(64);
  for (auto axis : {Representation::position, Representation::momentum}) {
    const auto th0 = cumulative_phase(zero, one, *g, axis);
    CHECK(*std::max_element(th0.begin(), th0.end()) == 0.0);
    CHECK(*std::min_element(th0.begin(), th0.end()) == 0.0);
    // kappa = 3/2
    std::fill(num.begin(), num.end(), 3.0);
    const auto th = cumulative_phase(num, two, *g, axis);
    const auto xi = g->axis(axis);
    const double origin = axis == Representation::position ? xi[0] : xi[g->size() / 2];
    for (std::size_t i = 0; i < 64; ++i) CHECK(std::abs(th[i] - 1.5 * (xi[i] - origin)) < 1e-12);
  }
}

TEST_CASE("cumulative phase of x is the antiderivative") {
  auto g = build_grid(256, -4.0, 4.0);
  std::vector<double> den(256, 1.0);
  const auto x = g->x();
  const auto th = cumulative_phase(x, den, *g, Representation::position);
  for (std::size_t i = 0; i < 256; ++i)
    CHECK(std::abs(th[i] - 0.5 * (x[i] * x[i] - x[0] * x[0])) < 1e-12);
}

TEST_CASE("phase quadrature convergence orders") {
  const double t1 = phase_error(64, false), t2 = phase_error(128, false);
  CHECK(std::log2(t1 / t2) == doctest::Approx(2.0).epsilon(0.05));
  const double c1 = phase_error(64, true), c2 = phase_error(128, true);
  CHECK(std::log2(c1 / c2) > 3.7);
  CHECK(c2 < t2);
}

TEST_CASE("zero denominator with nonzero numerator is rejected") {
  auto g = build_grid(16, -1.0, 1.0);
  std::vector<double> num(16, 1.0), den(16, 1.0);
  den[5] = 0.0;
  CHECK_THROWS_AS(cumulative_phase(num, den, *g, Representation::position), InfeasibleError);
  num[5] = 0.0;
  CHECK_NOTHROW(cumulative_phase(num, den, *g, Representation::position));
}

TEST_CASE("constant operators and magnitudes") {
  auto g = build_grid(32, -4.0, 4.0);
  std::vector<double> zero(32, 0.0), c(32, 0.7), r(32);
  for (std::size_t i = 0; i < 32; ++i) r[i] = 1.0 + 0.3 * std::cos(g->x()[i]);
  const auto a = build_position_lindblad(zero, c, *g);
  for (const auto& v : a.values()) CHECK(v == cplx(0.7, 0.0));
  const auto b = build_momentum_lindblad(zero, c, *g);
  for (const auto& v : b.values()) CHECK(v == cplx(0.7, 0.0));

  std::vector<double> f(32);
  for (std::size_t i = 0; i < 32; ++i) f[i] = std::sin(g->x()[i]);
  const auto op = build_position_lindblad(f, r, *g);
  const auto vals = op.values();
  for (std::size_t i = 0; i < 32; ++i) CHECK(std::abs(std::abs(vals[i]) - r[i]) < 1e-12);

  // the constant operator generates nothing: its kernel equals the empty one
  const std::vector<double> u(32, 0.0);
  const auto k_const = build_kernels(g, u, 1.0, {a, b}, 0.1);
  const auto k_none = build_kernels(g, u, 1.0, {}, 0.1);
  for (std::size_t k = 0; k < k_none.position_kernel.size(); ++k) {
    CHECK(k_const.position_kernel[k] == k_none.position_kernel[k]);
    CHECK(k_const.momentum_kernel[k] == k_none.momentum_kernel[k]);
  }
}

TEST_CASE("force and velocity recovery converge at second order") {
  double prev_x = 0.0, prev_p = 0.0;
  for (std::size_t n : {128u, 256u, 512u}) {
    auto g = build_grid(n, -8.0, 8.0);
    const auto f = barrier_derivative(*g, 0.0068);
    const std::vector<double> r(n, 0.05);
    const double ex = max_abs_diff(recovered_drift(build_position_lindblad(f, r, *g), *g), f);

    // a longer box refines dp over a fixed momentum range
    const double half = 8.0 * double(n) / 128.0;
    auto gm = build_grid(n, -half, half);
    std::vector<double> gv(n), s(n, 2.0);
    for (std::size_t j = 0; j < n; ++j) gv[j] = std::tanh(0.3 * gm->p()[j]);
    const double ep = max_abs_diff(recovered_drift(build_momentum_lindblad(gv, s, *gm), *gm), gv);
    if (prev_x > 0.0) {
      CHECK(std::log2(prev_x / ex) == doctest::Approx(2.0).epsilon(0.1));
      CHECK(std::log2(prev_p / ep) == doctest::Approx(2.0).epsilon(0.1));
    }
    prev_x = ex;
    prev_p = ep;
  }
}

TEST_CASE("jets for a flat potential are plane waves") {
  auto g = build_grid(64, -5.0, 5.0);
  const std::vector<double> du(64, 0.0);
  const auto jets = jets_from_barrier(du, 0.3, 0.2, *g);
  for (std::size_t i = 0; i < 64; ++i) {
    CHECK(jets.beta[i] == 0.0);
    CHECK(jets.p_plus[i] == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(jets.p_minus[i] == doctest::Approx(0.2).epsilon(1e-15));
    const double dx = g->x()[i] - g->x()[0];
    CHECK(std::abs(jets.a_plus.phase()[i] - 0.4 * dx) < 1e-12);
    CHECK(std::abs(jets.a_minus.phase()[i] + 0.4 * dx) < 1e-12);
    CHECK(jets.a_plus.magnitude()[i] == 0.3);
  }
}

TEST_CASE("jet feasibility bound for the tunneling barrier") {
  const double k0 = 0.0068, cp0 = 5e-4;
  const double max_du = 2.0 * k0 * std::exp(-0.5);
  const double bound = 4.0 * cp0 * cp0 / max_du;
  CHECK(bound == doctest::Approx(1.2123e-4).epsilon(1e-4));

  auto g = build_grid(256, -32.0, 32.0);  // x = +-1 are nodes
  const auto du = barrier_derivative(*g, k0);
  for (double frac : {0.5, 0.99}) {
    const double p0 = frac * bound;
    const auto jets = jets_from_barrier(du, cp0 / p0, p0, *g);
    const double c2 = jets.coupling * jets.coupling;
    for (std::size_t i = 0; i < 256; ++i) {
      CHECK(std::abs(jets.p_plus[i] - jets.p_minus[i] - du[i] / (2.0 * c2)) < 1e-10);
      // signed branch still squares to p0^2 +- beta
      CHECK(jets.p_plus[i] * jets.p_plus[i] ==
            doctest::Approx(p0 * p0 + jets.beta[i]).epsilon(1e-9));
      CHECK(jets.p_minus[i] * jets.p_minus[i] ==
            doctest::Approx(p0 * p0 - jets.beta[i]).epsilon(1e-9));
    }
  }
  CHECK_THROWS_AS(jets_from_barrier(du, cp0 / (1.01 * bound), 1.01 * bound, *g), InfeasibleError);
  CHECK_THROWS_AS(jets_from_barrier(du, 0.0, 1e-4, *g), InfeasibleError);
}

TEST_CASE("jet identity on random feasible inputs") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto g = build_grid(64, -6.0, 6.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> du(64);
    const double a = 0.1 + u(rng), w = 0.5 + u(rng);
    for (std::size_t i = 0; i < 64; ++i) du[i] = a * std::sin(w * g->x()[i] + u(rng));
    const double c = 0.2 + u(rng);
    const double pmin = a / (4.0 * c * c);
    const double p0 = pmin * (1.0 + 3.0 * u(rng));
    const auto jets = jets_from_barrier(du, c, p0, *g);
    for (std::size_t i = 0; i < 64; ++i)
      CHECK(std::abs(jets.p_plus[i] - jets.p_minus[i] - du[i] / (2.0 * c * c)) < 1e-10);
    // p0^2/|beta| >= 1 on both branches; only the principal one reproduces it
    double margin = 1e300;
    bool principal = true;
    for (std::size_t i = 0; i < 64; ++i) {
      if (jets.beta[i] != 0.0) margin = std::min(margin, p0 * p0 / std::abs(jets.beta[i]));
      CHECK(p0 * p0 >= std::abs(jets.beta[i]) * (1.0 - 1e-12));
      principal = principal && jets.p_plus[i] >= 0.0 && jets.p_minus[i] >= 0.0;
    }
    if (principal)
      CHECK(jets.validity_margin == doctest::Approx(margin));
    else
      CHECK(jets.validity_margin < 1.0);
  }
}

TEST_CASE("margin reaches 1 where the slower jet stops") {
  // with a = 4 p0 C^2 the slower jet stops at |dU/dx| = a / sqrt(2)
  auto g = build_grid(64, -6.0, 6.0);
  std::vector<double> du(64, 0.0);
  du[20] = 1.0;
  const double c = 0.5;
  const double p_stop = std::sqrt(2.0) / (4.0 * c * c);
  CHECK(jets_from_barrier(du, c, p_stop, *g).validity_margin == doctest::Approx(1.0).epsilon(1e-12));
  const double inside = jets_from_barrier(du, c, 1.2 * p_stop, *g).validity_margin;
  CHECK(inside > 1.0);
  // reference value a^2 / (2 u sqrt(a^2 - u^2)) with u = 1
  const double a = 4.0 * 1.2 * p_stop * c * c;
  CHECK(inside == doctest::Approx(a * a / (2.0 * std::sqrt(a * a - 1.0))).epsilon(1e-12));
  const double beyond = jets_from_barrier(du, c, 0.9 * p_stop, *g).validity_margin;
  CHECK(beyond < 1.0);
  CHECK_THROWS_AS(jets_from_barrier(du, c, 0.99 / (4.0 * c * c), *g), InfeasibleError);
}

TEST_CASE("trap jets supply the restoring force") {
  const double m = 1837.0, w = 0.01;
  auto g = build_grid(256, -4.0, 4.0);
  std::vector<double> dueff(256);
  for (std::size_t i = 0; i < 256; ++i) dueff[i] = m * w * w * g->x()[i];
  const double p0 = 1e-4, cp0 = 0.05;
  const auto jets = trap_from_potential(dueff, cp0 / p0, p0, *g);
  // net force from both jets, recovered by finite differences
  const auto fp = recovered_drift(jets.a_plus, *g);
  const auto fm = recovered_drift(jets.a_minus, *g);
  for (std::size_t i = 1; i + 1 < 256; ++i) {
    // U = 0 in the Hamiltonian, so the bath forces are the whole force
    CHECK(std::abs(fp[i] + fm[i] + dueff[i]) < 1e-6);
  }
  const std::vector<double> flat(256, 0.0);
  const auto free_jets = trap_from_potential(flat, 1.0, 0.5, *g);
  for (double b : free_jets.beta) CHECK(b == 0.0);
}

TEST_CASE("effective mass operator") {
  auto g = build_grid(128, -10.0, 10.0);
  const auto same = effective_mass_op(1837.0, 1837.0, 0.1, *g);
  for (const auto& v : same.values()) CHECK(v == cplx(0.1, 0.0));

  const double m = 1837.0, big = 18370.0, c = 0.1;
  const auto op = effective_mass_op(m, big, c, *g);
  for (std::size_t j = 0; j < 128; ++j) {
    const double p = g->p()[j];
    CHECK(op.phase()[j] == doctest::Approx(-(m - big) * p * p / (2.0 * m * big * c * c)));
    CHECK(op.magnitude()[j] == c);
  }
  // p = 1 by direct evaluation: 16533 / (2 * 1837 * 18370 * 0.01)
  CHECK(-(m - big) / (2.0 * m * big * c * c) == doctest::Approx(0.0244964).epsilon(1e-5));

  // velocity correction (1/M - 1/m) p from the centred phase slope
  const auto asc = g->ascending_order(Representation::momentum);
  for (std::size_t k = 1; k + 1 < 128; ++k) {
    const double slope = (op.phase()[asc[k + 1]] - op.phase()[asc[k - 1]]) / (2.0 * g->dp());
    const double p = g->p()[asc[k]];
    CHECK(-c * c * slope == doctest::Approx((1.0 / big - 1.0 / m) * p).epsilon(1e-9));
  }
  // the generic builder reproduces the same phase up to a constant
  std::vector<double> gv(128), s(128, c);
  for (std::size_t j = 0; j < 128; ++j) gv[j] = (1.0 / big - 1.0 / m) * g->p()[j];
  const auto built = build_momentum_lindblad(gv, s, *g);
  const double offset = built.phase()[0] - op.phase()[0];
  for (std::size_t j = 0; j < 128; ++j)
    CHECK(std::abs(built.phase()[j] - op.phase()[j] - offset) < 1e-10);
  CHECK_THROWS_AS(effective_mass_op(m, big, 0.0, *g), std::invalid_argument);
}

TEST_CASE("relativistic operator") {
  auto g = build_grid(128, -4.0, 4.0);
  const auto op = relativistic_op(1.0, 10.0, 20.0, *g);
  CHECK(op.phase()[0] == doctest::Approx(-0.25).epsilon(1e-15));
  CHECK(-1.0 * 100.0 / 400.0 == -0.25);

  const auto v = relativistic_velocity(1.0, 10.0, *g);
  CHECK(v[0] == 0.0);
  const auto order = g->ascending_order(Representation::momentum);
  for (std::size_t k = 65; k < 128; ++k) CHECK(v[order[k]] > v[order[k - 1]]);
  CHECK(v[63] < 10.0);
  CHECK(v[63] > 9.8);

  // drift correction v(p) - p/m on a grid with dp ~ 0.2
  auto fine = build_grid(128, -16.0, 16.0);
  const auto fv = relativistic_velocity(1.0, 10.0, *fine);
  const auto drift = recovered_drift(relativistic_op(1.0, 10.0, 20.0, *fine), *fine);
  double err = 0.0;
  for (std::size_t j = 0; j < 128; ++j)
    err = std::max(err, std::abs(drift[j] - (fv[j] - fine->p()[j])));
  CHECK(err < 1e-3);
}

TEST_CASE("decomposition closure and rejection") {
  auto g = build_grid(64, -5.0, 5.0);
  const double m = 2.0;
  TargetDynamics t;
  t.force.resize(64);
  t.velocity.resize(64);
  std::vector<double> du(64);
  for (std::size_t i = 0; i < 64; ++i) {
    t.force[i] = -0.3 * g->x()[i];
    du[i] = 0.1 * std::cos(g->x()[i]);
    t.velocity[i] = g->p()[i] / (m + 1.0);
  }
  const auto baths = default_decomposition(t, du, m, 0.5, 0.5, *g);
  REQUIRE(baths.position_baths.size() == 1);
  REQUIRE(baths.momentum_baths.size() == 1);
  CHECK_NOTHROW(check_decomposition(baths, t, du, m, *g));
  const auto ops = synthesize(baths, t, du, m, *g);
  CHECK(ops.size() == 2);

  auto broken = baths;
  broken.position_baths[0].force[3] += 1e-9;
  CHECK_THROWS_AS(check_decomposition(broken, t, du, m, *g), InfeasibleError);
  broken = baths;
  broken.momentum_baths[0].magnitude[7] = 0.0;
  CHECK_THROWS_AS(check_decomposition(broken, t, du, m, *g), InfeasibleError);

  // bare dynamics need no baths
  TargetDynamics bare;
  bare.force.assign(64, 0.0);
  bare.velocity.resize(64);
  for (std::size_t j = 0; j < 64; ++j) bare.velocity[j] = g->p()[j] / m;
  const std::vector<double> flat(64, 0.0);
  const auto none = default_decomposition(bare, flat, m, 0.0, 0.0, *g);
  CHECK(none.position_baths.empty());
  CHECK(none.momentum_baths.empty());
  CHECK_THROWS_AS(default_decomposition(t, du, m, 0.0, 0.5, *g), InfeasibleError);
}

TEST_CASE("global phase leaves kernels unchanged") {
  auto g = build_grid(32, -4.0, 4.0);
  std::vector<double> f(32), r(32, 0.4), u(32);
  for (std::size_t i = 0; i < 32; ++i) {
    f[i] = std::sin(g->x()[i]);
    u[i] = 0.1 * g->x()[i] * g->x()[i];
  }
  const auto a = build_position_lindblad(f, r, *g);
  const auto b = effective_mass_op(1.0, 3.0, 0.8, *g);
  const auto k1 = build_kernels(g, u, 1.0, {a, b}, 0.01);
  const auto k2 = build_kernels(g, u, 1.0, {a.with_global_phase(1.234), b.with_global_phase(-2.5)}, 0.01);
  double d = 0.0;
  for (std::size_t k = 0; k < k1.position_kernel.size(); ++k) {
    d = std::max(d, std::abs(k1.position_kernel[k] - k2.position_kernel[k]));
    d = std::max(d, std::abs(k1.momentum_kernel[k] - k2.momentum_kernel[k]));
  }
  CHECK(d <= 1e-14);
}
