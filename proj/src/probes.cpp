#include "solwave/probes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "solwave/functionals.hpp"
#include "solwave/spectral.hpp"

namespace solwave {

double tail_mass(const Field& u) {
  const Grid& grid = u.grid();
  const int n = grid.points();
  spectral::Dealiaser dealias(n);
  std::vector<double> padded;
  dealias.pad_to_values(u.spectrum(), padded);
  for (double& v : padded) v *= v;
  const Spectrum sq = dealias.values_to_full(padded);  // 2N grid, k = 0..N

  // integral over [-L/2, -0.45L] u [0.45L, L/2] of exp(i xi_k x):
  // -2 sin(0.9 pi k) / xi_k, and 0.1 L for k = 0
  const double length = grid.length();
  double total = sq[0].real() * 0.1 * length;
  for (int k = 1; k <= n; ++k) {
    const double xi = grid.wavenumber(k);
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;  // phase origin at -L/2
    const double integral = -2.0 * std::sin(0.9 * std::numbers::pi * k) / xi;
    const double weight = (k == n) ? 1.0 : 2.0;
    total += weight * sign * sq[k].real() * integral;
  }
  return std::max(0.0, 0.5 * total);
}

double nonlinear_bound_exponent(double s, double r) {
  require_admissible_exponents(s, r);
  if (s > 1.0) {
    // needs r + tau > 0 for the product estimate; fall back to a positive r~
    const double r_used = (r > -(1.0 + s)) ? r : 0.5 * (s - 1.0);
    const double tau = 0.5 * (1.0 + s - r_used);
    return (r_used + tau) / s;
  }
  const double r_used = (r > -1.0) ? r : 0.5 * (-1.0 + (s - 1.0));
  return (r_used + 1.0) / s;
}

double nonlinear_bound_ratio(const Field& u, double s, double r, double gamma) {
  const double l2 = sobolev_norm(u, 0.0);
  if (!(l2 > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  const double hs = sobolev_norm(u, 0.5 * s);
  const Field sq = dealiased_product(u, u);
  const double lhs = sobolev_norm(sq, 0.5 * r);
  return lhs / (std::pow(l2, 2.0 - gamma) * std::pow(hs, gamma));
}

Field random_band_limited(const GridPtr& grid, int band_limit, Envelope env, std::uint64_t seed) {
  if (band_limit < 1 || band_limit >= grid->points() / 2) {
    throw std::invalid_argument("band limit out of range");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double kmax = grid->wavenumber(band_limit);
  const double decay = 0.5 + 2.5 * uniform(rng);
  const double width = kmax * (0.1 + 0.9 * uniform(rng));
  Spectrum c(grid->modes());
  for (int k = 0; k <= band_limit; ++k) {
    const double xi = grid->wavenumber(k);
    double a = 1.0;
    switch (env) {
      case Envelope::flat: break;
      case Envelope::algebraic: a = std::pow(1.0 + xi * xi, -0.5 * decay); break;
      case Envelope::gaussian: a = std::exp(-(xi / width) * (xi / width)); break;
    }
    const double re = normal(rng), im = normal(rng);
    c[k] = a * Complex(re, k == 0 ? 0.0 : im);
  }
  return Field::from_spectrum(grid, c);
}

NonlinearBoundStats probe_nonlinear_bound(double s, double r, int ensemble_size,
                                          std::uint64_t seed, const NonlinearBoundOptions& opt) {
  require_admissible_exponents(s, r);
  if (ensemble_size < 1) throw std::invalid_argument("ensemble size must be >= 1");
  if (opt.band_limit > opt.points / 4) {
    throw std::invalid_argument("band limit must not exceed points/4");
  }
  const GridPtr grid = make_grid(opt.length, opt.points);
  NonlinearBoundStats st;
  st.gamma = nonlinear_bound_exponent(s, r);

  // Norms straight from spectra: u^2 of a field band-limited to N/4 is exact
  // in the truncated product.
  const Model model(grid, Symbol::bessel(0.0), Symbol::bessel(0.0));
  const auto w_s = Symbol::bessel(s).weights(*grid);
  const auto w_r = Symbol::bessel(r).weights(*grid);
  std::vector<double> ratios;
  ratios.reserve(ensemble_size);
  std::mt19937_64 seeds(seed);
  static constexpr Envelope kinds[] = {Envelope::flat, Envelope::algebraic, Envelope::gaussian};
  for (int i = 0; i < ensemble_size; ++i) {
    const Field u = random_band_limited(grid, 1 + static_cast<int>(seeds() % opt.band_limit),
                                        kinds[i % 3], seeds());
    const Spectrum c = u.spectrum();
    const double l2 = std::sqrt(spectral::weighted_norm2(c, std::vector<double>(c.size(), 1.0),
                                                         grid->length()));
    if (!(l2 > 0.0)) {
      ++st.skipped;
      continue;
    }
    const double hs = std::sqrt(spectral::weighted_norm2(c, w_s, grid->length()));
    const double lhs = std::sqrt(spectral::weighted_norm2(model.square(c), w_r, grid->length()));
    ratios.push_back(lhs / (std::pow(l2, 2.0 - st.gamma) * std::pow(hs, st.gamma)));
  }
  st.samples = static_cast<int>(ratios.size());
  if (ratios.empty()) return st;
  std::sort(ratios.begin(), ratios.end());
  st.min_ratio = ratios.front();
  st.max_ratio = ratios.back();
  const std::size_t mid = ratios.size() / 2;
  st.median_ratio = ratios.size() % 2 ? ratios[mid] : 0.5 * (ratios[mid - 1] + ratios[mid]);
  return st;
}

GammaEstimate probe_gamma_upper(double mu, std::span<const double> thetas, const Symbol& disp,
                                const Symbol& nl, const GridPtr& grid) {
  if (!(mu > 0.0)) throw std::invalid_argument("mu must be positive");
  if (thetas.empty()) throw std::invalid_argument("theta grid is empty");
  const Model model(grid, disp, nl);
  GammaEstimate est;
  est.mu = mu;
  est.gamma_upper = std::numeric_limits<double>::infinity();
  for (double theta : thetas) {
    if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("theta must lie in (0, 1)");
    const double e = model.values(longwave_ansatz(grid, mu, theta).spectrum()).energy;
    if (e < est.gamma_upper) {
      est.gamma_upper = e;
      est.best_theta = theta;
    }
  }
  est.provenance = "long-wave ansatz scan";
  est.below_mu = est.gamma_upper < disp(0.0) * mu;
  return est;
}

GammaEstimate probe_gamma_upper_scaled(double mu, std::span<const double> c3_values,
                                       const Symbol& disp, const Symbol& nl,
                                       const GridPtr& grid) {
  std::vector<double> thetas;
  for (double c3 : c3_values) {
    const double theta = c3 * mu;
    if (theta > 0.0 && theta < 1.0) thetas.push_back(theta);
  }
  GammaEstimate est = probe_gamma_upper(mu, thetas, disp, nl, grid);
  est.provenance = "long-wave ansatz scan, theta = C3 mu";
  return est;
}

InfimumGap infimum_gap(std::span<const GammaEstimate> estimates, double m0) {
  InfimumGap gap;
  gap.kappa_min = std::numeric_limits<double>::infinity();
  gap.kappa_max = -std::numeric_limits<double>::infinity();
  for (const auto& e : estimates) {
    const double ratio = (m0 * e.mu - e.gamma_upper) / (e.mu * e.mu * e.mu);
    gap.mu.push_back(e.mu);
    gap.ratio.push_back(ratio);
    gap.kappa_min = std::min(gap.kappa_min, ratio);
    gap.kappa_max = std::max(gap.kappa_max, ratio);
  }
  gap.positive = !estimates.empty() && gap.kappa_min > 0.0;
  return gap;
}

std::vector<SubadditivitySplit> probe_subadditivity(double mu, std::span<const double> splits,
                                                    const SolveConfig& base) {
  for (double lambda : splits) {
    if (!(lambda > 0.0 && lambda < mu)) {
      throw std::invalid_argument("subadditivity splits must lie strictly inside (0, mu)");
    }
  }
  auto estimate = [&](double m, bool& ok) {
    SolveConfig cfg = base;
    cfg.mu = m;
    cfg.speed.reset();
    if (cfg.method == Method::petviashvili) cfg.method = Method::descent;
    const WaveSolution sol = solve(cfg);
    ok = ok && sol.converged;
    return sol.values.energy;
  };
  bool ok_mu = true;
  const double g_mu = estimate(mu, ok_mu);
  std::vector<SubadditivitySplit> out;
  for (double lambda : splits) {
    SubadditivitySplit row;
    row.lambda = lambda;
    row.gamma_mu = g_mu;
    bool ok = ok_mu;
    row.gamma_lambda = estimate(lambda, ok);
    row.gamma_rest = estimate(mu - lambda, ok);
    row.margin = row.gamma_mu - row.gamma_lambda - row.gamma_rest;
    row.conclusive = ok;
    out.push_back(row);
  }
  return out;
}

namespace {

bool only_mean(std::span<const Complex> c) {
  for (std::size_t k = 1; k < c.size(); ++k) {
    if (c[k] != Complex{}) return false;
  }
  return true;
}

}  // namespace

std::vector<CommutatorRow> probe_commutator_decay(const Field& u, const Field& v, double r,
                                                  std::span<const double> radii, Cutoff rho) {
  require_same_grid(u, v);
  const Grid& grid = u.grid();
  const GridPtr& gp = u.grid_ptr();
  spectral::Dealiaser dealias(grid.points());
  const auto weights = Symbol::bessel(r).weights(grid);

  const Spectrum cu = u.spectrum(), cv = v.spectrum();
  const Spectrum u2 = dealias.product(cu, cu);
  const Spectrum v2 = dealias.product(cv, cv);
  Spectrum nu2 = u2;
  spectral::multiply(nu2, weights);

  auto times = [&](const Spectrum& cutoff, const Spectrum& f) {
    if (only_mean(cutoff)) {
      Spectrum out = f;
      for (auto& z : out) z *= cutoff[0].real();
      return out;
    }
    return dealias.product(cutoff, f);
  };

  std::vector<CommutatorRow> rows;
  for (double radius : radii) {
    if (!(radius > 0.0)) throw std::invalid_argument("cutoff radius must be positive");
    if (radius > grid.length() / 8.0) {
      throw std::invalid_argument("cutoff radius " + std::to_string(radius) +
                                  " exceeds L/8 for this box");
    }
    Spectrum cutoff(grid.modes());
    if (rho == Cutoff::constant) {
      cutoff[0] = 1.0;
    } else {
      cutoff = Field::from_function(gp, [radius](double x) {
                 const double y = x / radius;
                 return std::exp(-y * y);
               }).spectrum();
    }
    Spectrum first = times(cutoff, nu2);
    Spectrum second = times(cutoff, u2);
    spectral::multiply(second, weights);
    for (std::size_t k = 0; k < first.size(); ++k) first[k] -= second[k];
    rows.push_back({radius, std::abs(spectral::inner(v2, first, grid.length()))});
  }
  return rows;
}

FitResult loglog_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_fit: bad input");
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  FitResult fit;
  fit.x_min = std::numeric_limits<double>::infinity();
  fit.x_max = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw std::invalid_argument("loglog_fit: nonpositive data");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    syy += ly * ly;
    fit.x_min = std::min(fit.x_min, x[i]);
    fit.x_max = std::max(fit.x_max, x[i]);
  }
  const double dn = static_cast<double>(n);
  const double cxx = sxx - sx * sx / dn;
  const double cxy = sxy - sx * sy / dn;
  const double cyy = syy - sy * sy / dn;
  fit.slope = cxy / cxx;
  fit.intercept = (sy - fit.slope * sx) / dn;
  fit.r_squared = cyy > 0.0 ? std::clamp(cxy * cxy / (cxx * cyy), 0.0, 1.0) : 1.0;
  fit.count = static_cast<int>(n);
  return fit;
}

bool admitted(const SweepRecord& rec) {
  return rec.converged && rec.mu > 0.0 && rec.tail_mass <= 1e-8 * rec.mu;
}

std::map<std::string, FitResult> probe_scaling_laws(std::span<const SweepRecord> records) {
  std::vector<double> mu, gap, hs, nl, sup;
  for (const auto& rec : records) {
    if (!admitted(rec)) continue;
    mu.push_back(rec.mu);
    gap.push_back(rec.speed_gap);
    hs.push_back(rec.h_half_s_norm);
    nl.push_back(rec.nonlinearity);
    sup.push_back(rec.sup_norm);
  }
  if (mu.size() < 5) {
    throw std::invalid_argument("scaling fit needs at least 5 admitted records, got " +
                                std::to_string(mu.size()));
  }
  const auto [lo, hi] = std::minmax_element(mu.begin(), mu.end());
  if (*hi < 10.0 * *lo * (1.0 - 1e-12)) {
    throw std::invalid_argument("scaling fit needs admitted records spanning a decade in mu");
  }
  return {{"speed_gap", loglog_fit(mu, gap)},
          {"h_half_s_norm", loglog_fit(mu, hs)},
          {"nonlinearity", loglog_fit(mu, nl)},
          {"sup_norm", loglog_fit(mu, sup)}};
}

SmoothnessReport probe_smoothness(const Field& u) {
  const Grid& grid = u.grid();
  const Spectrum c = u.spectrum();
  const int m = static_cast<int>(c.size());
  SmoothnessReport rep;
  int k_peak = 0;
  for (int k = 0; k < m; ++k) {
    const double a = std::abs(c[k]);
    if (a > rep.peak) {
      rep.peak = a;
      k_peak = k;
    }
  }
  if (!(rep.peak > 0.0)) return rep;

  const int top_start = static_cast<int>(std::ceil(0.75 * (m - 1)));
  for (int k = top_start; k < m; ++k) {
    rep.top_band_ratio = std::max(rep.top_band_ratio, std::abs(c[k]) / rep.peak);
  }

  const double floor = 1e-11 * rep.peak;
  int k_end = k_peak;
  while (k_end + 1 < m && std::abs(c[k_end + 1]) > floor) ++k_end;
  const int k_mid = (k_peak + k_end) / 2;
  std::vector<double> xs, ys;
  for (int k = k_mid; k <= k_end; ++k) {
    const double a = std::abs(c[k]);
    if (!(a > 0.0)) continue;
    xs.push_back(grid.wavenumber(k));
    ys.push_back(std::log(a));
  }
  if (xs.size() >= 4) {
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sx += xs[i];
      sy += ys[i];
      sxx += xs[i] * xs[i];
      sxy += xs[i] * ys[i];
      syy += ys[i] * ys[i];
    }
    const double cxx = sxx - sx * sx / n, cxy = sxy - sx * sy / n, cyy = syy - sy * sy / n;
    const double slope = cxy / cxx;
    rep.decay_rate = -slope;
    rep.r_squared = cyy > 0.0 ? std::clamp(cxy * cxy / (cxx * cyy), 0.0, 1.0) : 0.0;
    rep.window_lo = xs.front();
    rep.window_hi = xs.back();
  }
  rep.exponential = rep.decay_rate > 0.0 && rep.r_squared >= 0.99;
  rep.admitted = rep.top_band_ratio <= 1e-10 && rep.exponential;
  return rep;
}

}  // namespace solwave
