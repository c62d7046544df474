#include <doctest.h>

#include <cmath>
#include <random>

#include "solwave/functionals.hpp"
#include "solwave/probes.hpp"
#include "solwave/solver.hpp"
#include "support.hpp"

using namespace solwave;
using namespace solwave::testing;
using doctest::Approx;

namespace {

std::vector<double> log_thetas(int count, double lo, double hi) {
  std::vector<double> out;
  for (int i = 0; i < count; ++i) out.push_back(lo * std::pow(hi / lo, i / double(count - 1)));
  return out;
}

SolveConfig sech_config(double mu) {
  SolveConfig cfg;
  cfg.mu = mu;
  cfg.grid = make_grid(200 * pi, 4096);
  return cfg;
}

}  // namespace

TEST_SUITE("tail_mass") {
  TEST_CASE("compact bump in the centre has no tail") {
    const auto g = make_grid(40.0, 512);
    const Field u = Field::from_function(g, [](double x) { return std::abs(x) < 1.0 ? std::exp(-1.0 / (1.0 - x * x)) : 0.0; });
    CHECK(tail_mass(u) <= 1e-11 * mass(u));
  }

  TEST_CASE("constant field has a tenth of its mass in the tail") {
    const auto g = make_grid(10.0, 64);
    const Field c = Field::from_function(g, [](double) { return 0.8; });
    CHECK(tail_mass(c) == Approx(0.1 * mass(c)).epsilon(1e-13));
  }

  TEST_CASE("sech wave on 200 pi with mu = 0.4") {
    const auto g = make_grid(200 * pi, 4096);
    CHECK(tail_mass(sech_wave(g, 0.2)) <= 1e-12 * 0.4);
  }
}

TEST_SUITE("nonlinear_bound") {
  TEST_CASE("exponent from the constructive bound") {
    CHECK(nonlinear_bound_exponent(2.0, 0.0) == Approx(0.75));
    CHECK(nonlinear_bound_exponent(1.5, 0.2) == Approx((0.2 + 0.5 * (1.0 + 1.3)) / 1.5));
    CHECK(nonlinear_bound_exponent(0.8, -0.5) == Approx(0.5 / 0.8));
    for (auto [s, r] : {std::pair{2.0, 0.0}, std::pair{1.5, 0.2}, std::pair{0.6, -0.6}, std::pair{3.0, 1.5}, std::pair{0.8, -0.5}}) {
      const double g = nonlinear_bound_exponent(s, r);
      CHECK(g > 0.0);
      CHECK(g < 1.0);
    }
    CHECK_THROWS_AS(nonlinear_bound_exponent(1.0, 0.5), std::invalid_argument);
  }

  TEST_CASE("cos(x), s = 2, r = 0 matches the closed form") {
    const auto g = make_grid(2 * pi, 64);
    const Field u = Field::from_function(g, [](double x) { return std::cos(x); });
    // ||u^2||^2 = 3 pi/4, ||u||^2 = pi, ||u||_{H^1}^2 = 2 pi
    const double want = std::sqrt(3 * pi / 4) / (std::pow(pi, 0.5 * 1.25) * std::pow(2 * pi, 0.5 * 0.75));
    CHECK(nonlinear_bound_ratio(u, 2.0, 0.0, 0.75) == Approx(want).epsilon(1e-13));
  }

  TEST_CASE("zero field is excluded") {
    CHECK(std::isnan(nonlinear_bound_ratio(Field(make_grid(2 * pi, 16)), 2.0, 0.0, 0.75)));
  }

  TEST_CASE("ratio is invariant under u -> c u") {
    const auto g = make_grid(2 * pi, 256);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const Field u = random_band_limited(g, 32, Envelope::algebraic, seed);
      const double base = nonlinear_bound_ratio(u, 1.5, 0.2, 0.9);
      for (double c : {1e-3, 0.5, 7.0, 1e4}) CHECK(nonlinear_bound_ratio(c * u, 1.5, 0.2, 0.9) == Approx(base).epsilon(1e-12));
    }
  }

  TEST_CASE("1e4 fields, s = 1.5, r = 0.2: max ratio stable as the band doubles") {
    NonlinearBoundOptions opt;
    const auto base = probe_nonlinear_bound(1.5, 0.2, 10000, 7, opt);
    opt.band_limit *= 2;
    opt.points *= 2;
    const auto wide = probe_nonlinear_bound(1.5, 0.2, 10000, 7, opt);
    CHECK(base.samples == 10000);
    CHECK(wide.samples == 10000);
    CHECK(std::isfinite(base.max_ratio));
    CHECK(wide.max_ratio < 2.0 * base.max_ratio);
    CHECK(wide.median_ratio < 2.0 * base.median_ratio);
    CHECK(base.min_ratio <= base.median_ratio);
    CHECK(base.median_ratio <= base.max_ratio);
  }

  TEST_CASE("seeded ensembles are reproducible") {
    const auto a = probe_nonlinear_bound(2.0, 0.0, 300, 11);
    const auto b = probe_nonlinear_bound(2.0, 0.0, 300, 11);
    const auto c = probe_nonlinear_bound(2.0, 0.0, 300, 12);
    CHECK(a.max_ratio == b.max_ratio);
    CHECK(a.median_ratio == b.median_ratio);
    CHECK(a.max_ratio != c.max_ratio);
  }

  TEST_CASE("parameter domain is enforced") {
    CHECK_THROWS_AS(probe_nonlinear_bound(1.0, 0.5, 10, 1), std::invalid_argument);
    CHECK_THROWS_AS(probe_nonlinear_bound(2.0, 0.0, 0, 1), std::invalid_argument);
    NonlinearBoundOptions opt;
    opt.band_limit = 100;
    CHECK_THROWS_AS(probe_nonlinear_bound(2.0, 0.0, 10, 1, opt), std::invalid_argument);
  }
}

TEST_SUITE("gamma_upper") {
  TEST_CASE("ansatz scan falls below mu") {
    const auto g = make_grid(200 * pi, 4096);
    const auto thetas = log_thetas(60, 1e-3, 0.999);
    for (auto [s, r] : {std::pair{2.0, 0.0}, std::pair{0.6, -0.6}, std::pair{3.0, 1.5}}) {
      for (double mu : {0.05, 0.2, 0.4, 1.0}) {
        const auto est = probe_gamma_upper(mu, thetas, Symbol::bessel(s), Symbol::bessel(r), g);
        CAPTURE(s);
        CAPTURE(mu);
        CHECK(est.below_mu);
        CHECK(est.gamma_upper < mu);
        CHECK(est.best_theta > 0.0);
        CHECK_FALSE(est.provenance.empty());
      }
    }
  }

  TEST_CASE("converged solution improves on the ansatz bound") {
    const SolveConfig cfg = sech_config(0.4);
    const auto est = probe_gamma_upper(0.4, log_thetas(60, 1e-3, 0.999), cfg.dispersive, cfg.nonlinear, cfg.grid);
    const WaveSolution sol = solve(cfg);
    REQUIRE(sol.converged);
    CHECK(sol.values.energy < 0.4);
    CHECK(sol.values.energy <= est.gamma_upper);
  }

  TEST_CASE("gap (mu - Gamma)/mu^3 approaches a positive constant as mu -> 0") {
    const auto g = make_grid(800 * pi, 8192);
    const std::vector<double> c3 = log_thetas(40, 0.05, 2.0);
    std::vector<GammaEstimate> ests;
    for (double mu : {0.025, 0.05, 0.1, 0.2}) {
      ests.push_back(probe_gamma_upper_scaled(mu, c3, Symbol::bessel(2.0), Symbol::bessel(0.0), g));
    }
    const InfimumGap gap = infimum_gap(ests);
    CHECK(gap.positive);
    CHECK(gap.kappa_min > 0.0);
    REQUIRE(gap.ratio.size() == 4);
    // with m = 1 + xi^2 and theta = c3 mu every term of E~(ansatz) is a
    // monomial in mu, so the gap ratio is constant in mu
    CHECK(gap.kappa_max / gap.kappa_min == Approx(1.0).epsilon(1e-9));
    // the ansatz never beats the exact minimum: gap ratio below 1/12
    for (double k : gap.ratio) CHECK(k <= 1.0 / 12 + 1e-9);
  }

  TEST_CASE("bad inputs") {
    const auto g = make_grid(20.0, 64);
    const std::vector<double> none;
    const std::vector<double> bad{0.5, 1.5};
    CHECK_THROWS_AS(probe_gamma_upper(0.4, none, Symbol::bessel(2.0), Symbol::bessel(0.0), g), std::invalid_argument);
    CHECK_THROWS_AS(probe_gamma_upper(0.4, bad, Symbol::bessel(2.0), Symbol::bessel(0.0), g), std::invalid_argument);
    const std::vector<double> ok{0.5};
    CHECK_THROWS_AS(probe_gamma_upper(-0.4, ok, Symbol::bessel(2.0), Symbol::bessel(0.0), g), std::invalid_argument);
  }
}

TEST_SUITE("subadditivity") {
  TEST_CASE("s = 2, r = 0, mu = 0.4, lambda = 0.2 is strict with margin > 1e-4") {
    const std::vector<double> splits{0.1, 0.2, 0.3};
    const auto rows = probe_subadditivity(0.4, splits, sech_config(0.4));
    REQUIRE(rows.size() == 3);
    for (const auto& row : rows) {
      CHECK(row.conclusive);
      CHECK(row.margin < -1e-4);
      CHECK(row.margin == Approx(row.gamma_mu - row.gamma_lambda - row.gamma_rest));
    }
    // closed-form family: E(mu) = mu - mu^3/12
    const auto E = [](double m) { return m - m * m * m / 12; };
    CHECK(rows[1].margin == Approx(E(0.4) - 2 * E(0.2)).epsilon(1e-6));
    // lambda <-> mu - lambda symmetry
    CHECK(rows[0].margin == Approx(rows[2].margin).epsilon(1e-9));
    CHECK(rows[0].gamma_lambda == Approx(rows[2].gamma_rest).epsilon(1e-9));
  }

  TEST_CASE("endpoints are excluded") {
    for (double lambda : {0.0, 0.4, -0.1, 0.5}) {
      const std::vector<double> splits{lambda};
      CHECK_THROWS_AS(probe_subadditivity(0.4, splits, sech_config(0.4)), std::invalid_argument);
    }
  }
}

TEST_SUITE("commutator") {
  const auto sech_field = [](const GridPtr& g) {
    return Field::from_function(g, [](double x) { return 1.0 / std::cosh(x); });
  };
  const std::vector<double> radii{5.0, 10.0, 20.0, 40.0};

  TEST_CASE("u = v makes the integral vanish by self-adjointness") {
    const auto g = make_grid(200 * pi, 4096);
    const Field u = sech_field(g);
    for (const auto& row : probe_commutator_decay(u, u, -0.5, radii)) CHECK(row.value <= 1e-15);
  }

  TEST_CASE("r = -0.5: strictly decreasing with I(40) < I(5)/10") {
    const auto g = make_grid(200 * pi, 4096);
    const Field u = sech_field(g);
    const Field v = Field::from_function(g, [](double x) { return 1.0 / std::cosh(x / 2); });
    const auto rows = probe_commutator_decay(u, v, -0.5, radii);
    REQUIRE(rows.size() == 4);
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].value < rows[i - 1].value);
    CHECK(rows[3].value < rows[0].value / 10);
    CHECK(rows[0].value > 0.0);
  }

  TEST_CASE("r = 0 and constant cutoff give exactly zero") {
    const auto g = make_grid(200 * pi, 2048);
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const Field u = random_trig(g, 40, seed);
      const Field v = random_trig(g, 40, seed + 9);
      for (const auto& row : probe_commutator_decay(u, v, 0.0, radii)) CHECK(row.value == 0.0);
      for (const auto& row : probe_commutator_decay(u, v, -0.7, radii, Cutoff::constant)) CHECK(row.value == 0.0);
    }
  }

  TEST_CASE("radius must be positive and fit the box") {
    const auto g = make_grid(100.0, 512);
    const Field u = sech_field(g);
    const std::vector<double> big{20.0};
    const std::vector<double> neg{-1.0};
    CHECK_THROWS_AS(probe_commutator_decay(u, u, -0.5, big), std::invalid_argument);
    CHECK_THROWS_AS(probe_commutator_decay(u, u, -0.5, neg), std::invalid_argument);
    const std::vector<double> fits{12.5};
    CHECK_NOTHROW(probe_commutator_decay(u, u, -0.5, fits));
  }
}

TEST_SUITE("scaling_laws") {
  TEST_CASE("loglog_fit recovers an exact power law") {
    const std::vector<double> x{0.1, 0.2, 0.4, 0.8};
    std::vector<double> y;
    for (double v : x) y.push_back(3.0 * std::pow(v, 1.7));
    const FitResult f = loglog_fit(x, y);
    CHECK(f.slope == Approx(1.7).epsilon(1e-13));
    CHECK(f.intercept == Approx(std::log(3.0)).epsilon(1e-12));
    CHECK(f.r_squared == Approx(1.0));
    CHECK(f.count == 4);
    CHECK(f.x_min == 0.1);
    CHECK(f.x_max == 0.8);
  }

  TEST_CASE("r_squared lies in [0, 1]") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.1, 10.0);
    for (int t = 0; t < 50; ++t) {
      std::vector<double> x, y;
      for (int i = 0; i < 8; ++i) {
        x.push_back(u(rng));
        y.push_back(u(rng));
      }
      const FitResult f = loglog_fit(x, y);
      CHECK(f.r_squared >= 0.0);
      CHECK(f.r_squared <= 1.0);
    }
  }

  TEST_CASE("s = 2, r = 0 sweep over [0.05, 0.5]") {
    SolveConfig cfg = sech_config(0.05);
    for (int i = 0; i < 8; ++i) cfg.continuation.push_back(0.05 * std::pow(10.0, i / 7.0));
    const SweepResult sweep = continuation_sweep(cfg);
    for (const auto& rec : sweep.records) CHECK(admitted(rec));
    const auto fits = probe_scaling_laws(sweep.records);
    CHECK(fits.at("speed_gap").slope == Approx(2.0).epsilon(0.05 / 2.0));
    CHECK(fits.at("h_half_s_norm").slope == Approx(0.5).epsilon(0.05 / 0.5));
    CHECK(fits.at("nonlinearity").slope == Approx(3.0).epsilon(0.1 / 3.0));
    for (const char* key : {"speed_gap", "h_half_s_norm", "nonlinearity"}) CHECK(fits.at(key).r_squared >= 0.995);
    REQUIRE(fits.count("sup_norm") == 1);
    // the sech family has sup norm sqrt(2) B = mu / sqrt(2)
    CHECK(fits.at("sup_norm").slope == Approx(1.0).epsilon(0.02));

    // slopes are invariant under a common rescaling of mu
    auto scaled = sweep.records;
    for (auto& rec : scaled) rec.mu *= 3.0;
    const auto fits3 = probe_scaling_laws(scaled);
    for (const auto& [key, fit] : fits) CHECK(fits3.at(key).slope == Approx(fit.slope).epsilon(1e-12));
  }

  TEST_CASE("insufficient or inadmissible records are rejected") {
    std::vector<SweepRecord> recs;
    for (int i = 0; i < 4; ++i) {
      SweepRecord r;
      r.mu = 0.05 * std::pow(3.0, i);
      r.nu = 1 - r.mu * r.mu / 4;
      r.speed_gap = 1 - r.nu;
      r.h_half_s_norm = r.sup_norm = r.nonlinearity = r.energy = r.mu;
      r.converged = true;
      recs.push_back(r);
    }
    CHECK_THROWS_AS(probe_scaling_laws(recs), std::invalid_argument);
    SweepRecord extra = recs.back();
    extra.mu = 0.06;
    recs.push_back(extra);
    CHECK_NOTHROW(probe_scaling_laws(recs));
    recs.back().tail_mass = 1.0;
    CHECK_FALSE(admitted(recs.back()));
    CHECK_THROWS_AS(probe_scaling_laws(recs), std::invalid_argument);
    recs.back().tail_mass = 0.0;
    recs.back().converged = false;
    CHECK_THROWS_AS(probe_scaling_laws(recs), std::invalid_argument);
    // narrow window: five records inside less than a decade
    std::vector<SweepRecord> narrow(recs.begin(), recs.begin() + 4);
    for (auto& r : narrow) r.mu *= 0.1 + 0.0;
    for (std::size_t i = 0; i < narrow.size(); ++i) narrow[i].mu = 0.1 + 0.1 * i;
    narrow.push_back(narrow.back());
    narrow.back().mu = 0.55;
    CHECK_THROWS_AS(probe_scaling_laws(narrow), std::invalid_argument);
  }
}

TEST_SUITE("smoothness") {
  TEST_CASE("sech spectrum decays like exp(-pi xi / (2 B))") {
    const auto g = make_grid(200 * pi, 4096);
    const auto rep = probe_smoothness(sech_wave(g, 0.2));
    CHECK(rep.exponential);
    CHECK(rep.admitted);
    CHECK(rep.r_squared >= 0.999);
    CHECK(rep.decay_rate == Approx(pi / (2 * 0.2)).epsilon(0.02));
    CHECK(rep.top_band_ratio <= 1e-12);
  }

  TEST_CASE("white noise is flagged") {
    const auto g = make_grid(50.0, 512);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n;
    const Field u = Field::from_function(g, [&](double) { return n(rng); });
    const auto rep = probe_smoothness(u);
    CHECK_FALSE(rep.exponential);
    CHECK_FALSE(rep.admitted);
    CHECK(rep.top_band_ratio > 1e-3);
  }

  TEST_CASE("converged s = 0.6, r = -0.6 solution has a negligible top band") {
    SolveConfig cfg = sech_config(0.4);
    cfg.dispersive = Symbol::bessel(0.6);
    cfg.nonlinear = Symbol::bessel(-0.6);
    const WaveSolution sol = solve(cfg);
    REQUIRE(sol.converged);
    const auto rep = probe_smoothness(sol.u);
    CHECK(rep.top_band_ratio <= 1e-10);
    CHECK(rep.admitted);
  }
}

TEST_SUITE("gamma_upper") {
  TEST_CASE("non-polynomial symbol: gap ratio stays positive and bounded as mu -> 0") {
    const auto g = make_grid(800 * pi, 8192);
    const std::vector<double> c3 = log_thetas(40, 0.05, 2.0);
    std::vector<GammaEstimate> ests;
    for (double mu : {0.025, 0.05, 0.1, 0.2}) {
      ests.push_back(probe_gamma_upper_scaled(mu, c3, Symbol::bessel(1.2), Symbol::bessel(0.1), g));
    }
    const InfimumGap gap = infimum_gap(ests);
    CHECK(gap.positive);
    CHECK(gap.kappa_min > 0.0);
    CHECK(gap.kappa_max / gap.kappa_min < 1.5);
    // successive differences shrink as mu -> 0
    REQUIRE(gap.ratio.size() == 4);
    CHECK(std::abs(gap.ratio[0] - gap.ratio[1]) < std::abs(gap.ratio[1] - gap.ratio[2]));
    CHECK(std::abs(gap.ratio[1] - gap.ratio[2]) < std::abs(gap.ratio[2] - gap.ratio[3]));
  }
}
