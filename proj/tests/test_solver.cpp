#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "solwave/functionals.hpp"
#include "solwave/probes.hpp"
#include "solwave/solver.hpp"
#include "support.hpp"

using namespace solwave;
using namespace solwave::testing;
using doctest::Approx;

namespace {

SolveConfig sech_config(double mu = 0.4) {
  SolveConfig cfg;
  cfg.mu = mu;
  cfg.grid = make_grid(200 * pi, 4096);
  return cfg;
}

double peak(const Field& u) { return u.max_abs(); }

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("exponent assumption is a hard error") {
    SolveConfig cfg = sech_config();
    CHECK_NOTHROW(cfg.validate());
    cfg.nonlinear = Symbol::bessel(1.0);
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.nonlinear = Symbol::bessel(0.0);
    cfg.dispersive = Symbol::bessel(-0.5);
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    CHECK_THROWS_AS(require_admissible_exponents(0.0, -2.0), std::invalid_argument);
    CHECK_THROWS_AS(require_admissible_exponents(0.6, -0.4), std::invalid_argument);
    CHECK_NOTHROW(require_admissible_exponents(0.6, -0.6));
  }

  TEST_CASE("tolerances and iteration limits") {
    SolveConfig cfg = sech_config();
    cfg.tol_residual = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = sech_config();
    cfg.tol_step = -1.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = sech_config();
    cfg.max_iter = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = sech_config();
    cfg.mu = -0.1;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  }

  TEST_CASE("method names") {
    for (Method m : {Method::descent, Method::petviashvili, Method::hybrid}) CHECK(parse_method(to_string(m)) == m);
    CHECK_THROWS_AS(parse_method("newton"), std::invalid_argument);
  }
}

TEST_SUITE("longwave_initial_guess") {
  TEST_CASE("mass is exactly mu and smaller theta widens the profile") {
    const auto g = make_grid(200 * pi, 4096);
    const Field wide = longwave_ansatz(g, 0.4, 0.1);
    const Field narrow = longwave_ansatz(g, 0.4, 0.5);
    CHECK(mass(wide) == Approx(0.4).epsilon(1e-14));
    CHECK(mass(narrow) == Approx(0.4).epsilon(1e-14));
    CHECK(peak(wide) < peak(narrow));
    // peak scales as sqrt(theta) at fixed mass
    CHECK(peak(narrow) / peak(wide) == Approx(std::sqrt(5.0)).epsilon(1e-10));
  }

  TEST_CASE("theta = 1, mu = 0.4: peak sqrt(mu) (2/sqrt(pi))^(1/2)") {
    const auto g = make_grid(200 * pi, 4096);
    const Field u = longwave_ansatz(g, 0.4, 1.0);
    // unit-mass Gaussian phi = pi^{-1/4} sqrt(2) exp(-x^2/2): 1/2 int phi^2 = 1
    const double want = std::sqrt(0.4) * std::sqrt(2.0 / std::sqrt(pi));
    CHECK(peak(u) == Approx(want).epsilon(1e-12));
    CHECK(want == Approx(0.6719).epsilon(1e-4));
  }

  TEST_CASE("theta outside (0, 1] is rejected") {
    const auto g = make_grid(20.0, 64);
    CHECK_THROWS_AS(longwave_ansatz(g, 0.4, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(longwave_ansatz(g, 0.4, 1.5), std::invalid_argument);
    SolveConfig cfg = sech_config();
    cfg.theta0 = 2.0;
    CHECK_THROWS_AS(longwave_initial_guess(cfg), std::invalid_argument);
    cfg.theta0 = 0.3;
    CHECK(mass(longwave_initial_guess(cfg)) == Approx(0.4).epsilon(1e-14));
  }
}

TEST_SUITE("project_mass") {
  TEST_CASE("examples") {
    const auto g = make_grid(2 * pi, 32);
    const Field c = Field::from_function(g, [](double x) { return std::cos(x); });
    CHECK(max_diff(project_mass(c, pi / 2), c) <= 1e-15);
    CHECK(max_diff(project_mass(2.0 * c, pi / 2), c) <= 1e-15);
    CHECK(max_diff(project_mass(c, pi), std::sqrt(2.0) * c) <= 1e-15);
    CHECK_THROWS_AS(project_mass(Field(g), 1.0), std::domain_error);
  }
}

TEST_SUITE("constrained_descent") {
  TEST_CASE("s = 2, r = 0, mu = 0.4 recovers the sech wave") {
    const SolveConfig cfg = sech_config();
    const WaveSolution sol = constrained_descent(cfg, longwave_initial_guess(cfg));
    CHECK(sol.converged);
    CHECK(std::abs(sol.nu - 0.96) <= 1e-4);
    CHECK(std::abs(peak(sol.u) - std::sqrt(0.08)) <= 1e-4);
    CHECK(std::abs(mass(sol.u) - 0.4) / 0.4 <= 1e-10);
    CHECK(sol.residual_l2 == Approx(l2(el_residual(sol.u, sol.nu, cfg.dispersive, cfg.nonlinear))).epsilon(1e-10));
    CHECK(sol.values.energy < sol.mu);
    CHECK(sol.values.energy == Approx(0.4 - std::pow(0.4, 3) / 12).epsilon(1e-8));
  }

  TEST_CASE("exact start terminates within 2 iterations") {
    SolveConfig cfg = sech_config();
    cfg.tol_residual = 1e-8;
    const WaveSolution sol = constrained_descent(cfg, sech_wave(cfg.grid, 0.2));
    CHECK(sol.converged);
    CHECK(sol.iterations <= 2);
    CHECK(sol.residual_l2 <= cfg.tol_residual);
  }

  TEST_CASE("low dispersion s = 0.6, r = -0.6, mu = 0.2") {
    SolveConfig cfg = sech_config(0.2);
    cfg.dispersive = Symbol::bessel(0.6);
    cfg.nonlinear = Symbol::bessel(-0.6);
    const WaveSolution sol = solve(cfg);
    CHECK(sol.converged);
    CHECK(sol.nu < 1.0);
    CHECK(sol.residual_l2 <= 1e-7);
    CHECK(sol.values.energy < sol.mu);
  }

  TEST_CASE("zero initial field is rejected") {
    const SolveConfig cfg = sech_config();
    CHECK_THROWS_AS(constrained_descent(cfg, Field(cfg.grid)), std::invalid_argument);
  }

  TEST_CASE("iteration limit returns a flagged partial state") {
    SolveConfig cfg = sech_config();
    cfg.max_iter = 2;
    const WaveSolution sol = constrained_descent(cfg, longwave_initial_guess(cfg));
    CHECK_FALSE(sol.converged);
    CHECK(sol.iterations == 2);
    CHECK(std::abs(mass(sol.u) - 0.4) / 0.4 <= 1e-12);
    CHECK_FALSE(sol.message.empty());
  }

  TEST_CASE("mass is held after every step and energy is nonincreasing over the window") {
    SolveConfig cfg = sech_config();
    cfg.grid = make_grid(100 * pi, 1024);
    cfg.auto_enlarge = false;
    const Field u0 = longwave_initial_guess(cfg);
    std::vector<double> energies;
    for (int k = 1; k <= 30; ++k) {
      cfg.max_iter = k;
      const WaveSolution sol = constrained_descent(cfg, u0);
      CHECK(std::abs(mass(sol.u) - cfg.mu) / cfg.mu <= 1e-12);
      energies.push_back(sol.values.energy);
      if (sol.converged) break;
    }
    REQUIRE(energies.size() > 3);
    const std::size_t window = static_cast<std::size_t>(cfg.nonmonotone_window);
    for (std::size_t k = 1; k < energies.size(); ++k) {
      const std::size_t lo = k > window ? k - window : 0;
      const double ref = *std::max_element(energies.begin() + lo, energies.begin() + k);
      CHECK(energies[k] <= ref + 1e-14);
    }
    CHECK(energies.back() < energies.front());
  }
}

TEST_SUITE("petviashvili") {
  TEST_CASE("nu = 0.96 converges to the sech profile with mu = 0.4") {
    SolveConfig cfg = sech_config();
    cfg.method = Method::petviashvili;
    cfg.speed = 0.96;
    const WaveSolution sol = petviashvili(0.96, cfg, longwave_initial_guess(cfg));
    CHECK(sol.converged);
    CHECK(std::abs(sol.mu - 0.4) <= 1e-5);
    CHECK(max_diff(recentre(sol.u).u, sech_wave(cfg.grid, 0.2)) <= 1e-6);
  }

  TEST_CASE("exact solution has stabilizing factor 1") {
    const SolveConfig cfg = sech_config();
    CHECK(stabilizing_factor(sech_wave(cfg.grid, 0.2), 0.96, cfg) == Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("speed at or above m(0) is rejected") {
    const SolveConfig cfg = sech_config();
    const Field u0 = longwave_initial_guess(cfg);
    CHECK_THROWS_AS(petviashvili(1.0, cfg, u0), std::invalid_argument);
    CHECK_THROWS_AS(petviashvili(1.3, cfg, u0), std::invalid_argument);
  }

  TEST_CASE("zero input aborts") {
    const SolveConfig cfg = sech_config();
    const WaveSolution sol = petviashvili(0.96, cfg, Field(cfg.grid));
    CHECK_FALSE(sol.converged);
    CHECK_FALSE(sol.message.empty());
  }
}

TEST_SUITE("preconditioned_refine") {
  TEST_CASE("exact solution is a fixed point") {
    const SolveConfig cfg = sech_config();
    const WaveSolution exact = assess(sech_wave(cfg.grid, 0.2), cfg, Method::descent, 0);
    const WaveSolution out = preconditioned_refine(exact, cfg);
    CHECK(max_diff(out.u, exact.u) <= 1e-12);
  }

  TEST_CASE("descent output at 1e-6 is polished below 1e-9 within 50 sweeps") {
    SolveConfig cfg = sech_config();
    cfg.tol_residual = 1e-6;
    const WaveSolution rough = constrained_descent(cfg, longwave_initial_guess(cfg));
    REQUIRE(rough.residual_l2 <= 1e-6);
    cfg.tol_residual = 1e-9;
    cfg.max_iter = 50;
    const WaveSolution fine = preconditioned_refine(rough, cfg);
    CHECK(fine.residual_l2 < 1e-9);
    CHECK(fine.iterations - rough.iterations <= 50);
    CHECK(std::abs(mass(fine.u) - 0.4) / 0.4 <= 1e-10);
  }

  TEST_CASE("small mu = 0.01: multiplier bounded by 1 and the iteration is stable") {
    SolveConfig cfg = sech_config(0.01);
    cfg.grid = make_grid(3200 * pi, 4096);
    const double nu = 1.0 - 0.25 * 0.01 * 0.01;
    const auto& g = *cfg.grid;
    double sup = 0.0;
    for (int k = 0; k <= g.points() / 2; ++k) {
      const double m = cfg.dispersive(g.wavenumber(k));
      sup = std::max(sup, m / (m - nu + 1.0));
    }
    CHECK(sup <= 1.0);
    const WaveSolution exact = assess(sech_wave(cfg.grid, 0.005), cfg, Method::descent, 0);
    cfg.max_iter = 20;
    const WaveSolution out = preconditioned_refine(exact, cfg);
    CHECK(std::isfinite(out.residual_l2));
    CHECK(out.residual_l2 <= exact.residual_l2 * 1.000001);
    CHECK(max_diff(out.u, exact.u) <= 1e-8);
  }
}

TEST_SUITE("recentre") {
  TEST_CASE("centred even profile is unchanged") {
    const auto g = make_grid(200 * pi, 4096);
    const Field u = sech_wave(g, 0.2);
    const auto r = recentre(u);
    CHECK_FALSE(r.degenerate);
    CHECK(max_diff(r.u, u) <= 1e-12);
  }

  TEST_CASE("profile shifted by 17 nodes is recentred") {
    const auto g = make_grid(200 * pi, 4096);
    const double shift = 17 * g->spacing();
    const Field moved = Field::from_function(g, [&](double x) { return std::sqrt(0.08) / std::cosh(0.2 * (x - shift)); });
    const auto r = recentre(moved);
    CHECK(r.peak_position == Approx(shift).epsilon(1e-6));
    CHECK(max_diff(r.u, sech_wave(g, 0.2)) <= 1e-3);
    CHECK(l2_diff(r.u, sech_wave(g, 0.2)) <= 1e-9);
  }

  TEST_CASE("sub-grid shift and negative peak") {
    const auto g = make_grid(100 * pi, 2048);
    const double shift = 3.37 * g->spacing();
    const Field moved = Field::from_function(g, [&](double x) { return -0.5 / std::cosh(0.3 * (x - shift)); });
    const auto r = recentre(moved);
    CHECK(r.peak_position == Approx(shift).epsilon(1e-8));
    const Field want = Field::from_function(g, [](double x) { return -0.5 / std::cosh(0.3 * x); });
    CHECK(max_diff(r.u, want) <= 1e-10);
  }

  TEST_CASE("constant field is degenerate") {
    const auto g = make_grid(10.0, 32);
    const Field c = Field::from_function(g, [](double) { return 0.7; });
    const auto r = recentre(c);
    CHECK(r.degenerate);
    CHECK(max_diff(r.u, c) == 0.0);
  }

  TEST_CASE("evenization symmetrizes") {
    const auto g = make_grid(40.0, 256);
    const Field u = Field::from_function(g, [](double x) { return std::exp(-x * x) * (1.0 + 0.05 * std::sin(x)); });
    const Field e = recentre(u, true).u;
    double asym = 0.0;
    const int n = g->points();
    for (int j = 1; j < n; ++j) asym = std::max(asym, std::abs(e[j] - e[n - j]));
    CHECK(asym <= 1e-13);
  }
}

TEST_SUITE("solve") {
  TEST_CASE("methods agree on the sech profile") {
    SolveConfig cfg = sech_config();
    const WaveSolution d = solve(cfg);
    cfg.method = Method::hybrid;
    const WaveSolution h = solve(cfg);
    cfg.method = Method::petviashvili;
    cfg.speed = d.nu;
    const WaveSolution p = solve(cfg);
    REQUIRE(d.converged);
    REQUIRE(h.converged);
    REQUIRE(p.converged);
    CHECK(l2_diff(d.u, p.u) <= 1e-6);
    CHECK(l2_diff(d.u, h.u) <= 1e-6);
    CHECK(l2_diff(d.u, sech_wave(cfg.grid, 0.2)) <= 1e-6);
  }

  TEST_CASE("translated initial guess gives the same profile") {
    const SolveConfig cfg = sech_config();
    const WaveSolution base = solve(cfg);
    const Field guess = Field::from_function(cfg.grid, [](double x) {
      const double y = x - 37.3;
      return std::exp(-0.02 * y * y);
    });
    const WaveSolution moved = solve(cfg, guess);
    REQUIRE(moved.converged);
    CHECK(l2_diff(base.u, moved.u) <= 1e-6);
  }

  TEST_CASE("subcritical speed and energy below mu across exponents") {
    for (auto [s, r] : {std::pair{2.0, 0.0}, std::pair{1.2, 0.1}, std::pair{0.6, -0.6}, std::pair{3.0, 1.5}}) {
      SolveConfig cfg = sech_config(0.4);
      cfg.dispersive = Symbol::bessel(s);
      cfg.nonlinear = Symbol::bessel(r);
      const WaveSolution sol = solve(cfg);
      CAPTURE(s);
      CAPTURE(r);
      CHECK(sol.converged);
      CHECK(sol.subcritical);
      CHECK(sol.nu < 1.0);
      CHECK(sol.values.energy < sol.mu);
      CHECK(std::abs(mass(sol.u) - sol.mu) / sol.mu <= 1e-10);
    }
  }

  TEST_CASE("small box is enlarged until the tail is negligible") {
    SolveConfig cfg = sech_config(0.1);
    cfg.grid = make_grid(50 * pi, 1024);
    const WaveSolution sol = solve(cfg);
    CHECK(sol.converged);
    CHECK(sol.u.grid().length() > 50 * pi);
    CHECK(tail_mass(sol.u) <= 1e-10 * sol.mu);
  }
}

TEST_SUITE("continuation_sweep") {
  TEST_CASE("nu follows 1 - mu^2/4") {
    SolveConfig cfg = sech_config();
    for (int i = 1; i <= 10; ++i) cfg.continuation.push_back(0.05 * i);
    const SweepResult out = continuation_sweep(cfg);
    REQUIRE(out.records.size() == 10);
    for (const auto& rec : out.records) {
      CAPTURE(rec.mu);
      CHECK(rec.converged);
      CHECK(std::abs(rec.nu - (1.0 - rec.mu * rec.mu / 4)) <= 1e-3);
      CHECK(rec.speed_gap == Approx(1.0 - rec.nu));
    }
  }

  TEST_CASE("singleton list is one solve") {
    SolveConfig cfg = sech_config();
    cfg.continuation = {0.4};
    const SweepResult out = continuation_sweep(cfg);
    const WaveSolution one = solve(cfg);
    REQUIRE(out.solutions.size() == 1);
    CHECK(max_diff(out.solutions[0].u, one.u) == 0.0);
    CHECK(out.records[0].nu == one.nu);
  }

  TEST_CASE("unreachable tolerance gives flagged rows and the sweep continues") {
    SolveConfig cfg = sech_config();
    cfg.continuation = {0.2, 0.3, 0.4};
    cfg.tol_residual = 1e-30;
    cfg.tol_step = 1e-300;
    cfg.max_iter = 20;
    cfg.auto_enlarge = false;
    const SweepResult out = continuation_sweep(cfg);
    REQUIRE(out.records.size() == 3);
    for (const auto& rec : out.records) {
      CHECK_FALSE(rec.converged);
      CHECK(std::isfinite(rec.residual_l2));
    }
  }

  TEST_CASE("bad lists are rejected") {
    SolveConfig cfg = sech_config();
    CHECK_THROWS_AS(continuation_sweep(cfg), std::invalid_argument);
    cfg.continuation = {0.3, 0.2};
    CHECK_THROWS_AS(continuation_sweep(cfg), std::invalid_argument);
    cfg.continuation = {-0.1, 0.2};
    CHECK_THROWS_AS(continuation_sweep(cfg), std::invalid_argument);
  }
}
