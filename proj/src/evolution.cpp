#include "solwave/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace solwave {

namespace {

constexpr int kContourPoints = 64;

/// phi-type ETDRK4 coefficients by the contour mean of Kassam & Trefethen,
/// accurate also where z is near 0.
struct EtdCoefficients {
  Complex q, f1, f2, f3;
};

EtdCoefficients etd_coefficients(Complex z, double h) {
  EtdCoefficients c{};
  for (int j = 0; j < kContourPoints; ++j) {
    const double theta = std::numbers::pi * (j + 0.5) / kContourPoints;
    // upper half circle plus its conjugate keeps the mean real for real z
    for (double sign : {1.0, -1.0}) {
      const Complex w = z + Complex(std::cos(theta), sign * std::sin(theta));
      const Complex ew = std::exp(w);
      const Complex ew2 = std::exp(0.5 * w);
      c.q += (ew2 - 1.0) / w;
      const Complex w3 = w * w * w;
      c.f1 += (-4.0 - w + ew * (4.0 - 3.0 * w + w * w)) / w3;
      c.f2 += (2.0 + w + ew * (w - 2.0)) / w3;
      c.f3 += (-4.0 - 3.0 * w - w * w + ew * (4.0 - w)) / w3;
    }
  }
  const double scale = h / (2.0 * kContourPoints);
  c.q *= scale;
  c.f1 *= scale;
  c.f2 *= scale;
  c.f3 *= scale;
  return c;
}

}  // namespace

std::vector<Complex> linear_propagator(double dt, const Symbol& disp, const Grid& grid) {
  if (!(dt > 0.0)) throw std::invalid_argument("linear_propagator: dt must be positive");
  std::vector<Complex> f(grid.modes());
  for (int k = 0; k < grid.modes(); ++k) {
    const double xi = grid.wavenumber(k);
    const double phase = -xi * disp(xi) * dt;
    f[k] = Complex(std::cos(phase), std::sin(phase));
  }
  return f;
}

double stability_ceiling(const Field& u0, const Symbol& nl) {
  const auto w = nl.weights(u0.grid());
  double nmax = 0.0;
  for (double v : w) nmax = std::max(nmax, std::abs(v));
  const double amp = u0.max_abs();
  const double scale = amp * amp * nmax * u0.grid().max_wavenumber();
  return scale > 0.0 ? 1.0 / scale : std::numeric_limits<double>::infinity();
}

Integrator::Integrator(GridPtr grid, const Symbol& disp, const Symbol& nl, double dt)
    : grid_(grid), model_(grid, disp, nl), dt_(dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("Integrator: bad dt");
  const int m = grid_->modes();
  e_.resize(m);
  e2_.resize(m);
  q_.resize(m);
  f1_.resize(m);
  f2_.resize(m);
  f3_.resize(m);
  const auto w = model_.dispersive_weights();
  for (int k = 0; k < m; ++k) {
    // the unpaired Nyquist mode is held fixed (its forcing is zeroed)
    const double xi = (k == m - 1) ? 0.0 : grid_->wavenumber(k);
    const Complex lin(0.0, -xi * w[k]);
    const Complex z = lin * dt;
    e_[k] = std::exp(z);
    e2_[k] = std::exp(0.5 * z);
    const auto c = etd_coefficients(z, dt);
    q_[k] = c.q;
    f1_[k] = c.f1;
    f2_[k] = c.f2;
    f3_[k] = c.f3;
  }
}

Spectrum Integrator::nonlinear_term(const Spectrum& u) const {
  // u_t = -(m u)_x + (u n u^2)_x; the first part is in the propagator
  Spectrum c = model_.cubic(u);
  spectral::differentiate(c, *grid_);
  return c;
}

void Integrator::advance(Spectrum& v) const {
  const std::size_t m = v.size();
  const Spectrum nv = nonlinear_term(v);
  Spectrum a(m), b(m), c(m);
  for (std::size_t k = 0; k < m; ++k) a[k] = e2_[k] * v[k] + q_[k] * nv[k];
  const Spectrum na = nonlinear_term(a);
  for (std::size_t k = 0; k < m; ++k) b[k] = e2_[k] * v[k] + q_[k] * na[k];
  const Spectrum nb = nonlinear_term(b);
  for (std::size_t k = 0; k < m; ++k) c[k] = e2_[k] * a[k] + q_[k] * (2.0 * nb[k] - nv[k]);
  const Spectrum nc = nonlinear_term(c);
  for (std::size_t k = 0; k < m; ++k) {
    v[k] = e_[k] * v[k] + f1_[k] * nv[k] + 2.0 * f2_[k] * (na[k] + nb[k]) + f3_[k] * nc[k];
  }
  v[0].imag(0.0);
  v[m - 1].imag(0.0);
}

Field step(const Field& u, const EvolveConfig& cfg) {
  if (!u.is_finite()) throw std::domain_error("step: non-finite input");
  const Integrator integrator(u.grid_ptr(), cfg.dispersive, cfg.nonlinear, cfg.dt);
  Spectrum c = u.spectrum();
  integrator.advance(c);
  Field out = Field::from_spectrum(u.grid_ptr(), c);
  if (!out.is_finite()) throw std::domain_error("step: solution blew up");
  return out;
}

double Trajectory::mass_drift() const {
  double worst = 0.0;
  const double q0 = series.front().mass;
  for (const auto& s : series) worst = std::max(worst, std::abs(s.mass - q0));
  return q0 > 0.0 ? worst / q0 : worst;
}

double Trajectory::energy_drift() const {
  double worst = 0.0;
  const double e0 = series.front().energy;
  for (const auto& s : series) worst = std::max(worst, std::abs(s.energy - e0));
  return e0 != 0.0 ? worst / std::abs(e0) : worst;
}

Trajectory evolve(const Field& u0, const EvolveConfig& cfg) {
  if (!u0.is_finite()) throw std::domain_error("evolve: non-finite initial data");
  if (!(cfg.T > 0.0)) throw std::invalid_argument("evolve: T must be positive");
  if (cfg.record_every < 1) throw std::invalid_argument("evolve: record_every must be >= 1");
  const double ceiling = stability_ceiling(u0, cfg.nonlinear);
  double dt = cfg.dt;
  if (dt <= 0.0) dt = std::min(0.1 * ceiling, cfg.T);
  if (dt > ceiling) {
    throw std::invalid_argument("evolve: dt " + std::to_string(dt) +
                                " exceeds the stability ceiling " + std::to_string(ceiling));
  }
  const int steps = std::max(1, static_cast<int>(std::ceil(cfg.T / dt - 1e-9)));
  dt = cfg.T / steps;

  const Integrator integrator(u0.grid_ptr(), cfg.dispersive, cfg.nonlinear, dt);
  Trajectory traj;
  traj.dt = dt;
  auto record = [&](const Spectrum& c, double t) {
    const auto v = integrator.model().values(c);
    traj.series.push_back({t, v.mass, v.energy});
  };

  Spectrum c = u0.spectrum();
  record(c, 0.0);
  traj.fields.push_back(u0);
  traj.field_times.push_back(0.0);
  Spectrum last_good = c;
  int n = 0;
  for (; n < steps; ++n) {
    integrator.advance(c);
    const bool finite = std::all_of(c.begin(), c.end(), [](const Complex& z) {
      return std::isfinite(z.real()) && std::isfinite(z.imag());
    });
    if (!finite) {
      traj.blew_up = true;
      traj.message = "non-finite state at step " + std::to_string(n + 1);
      c = last_good;
      break;
    }
    last_good = c;
    const int done = n + 1;
    if (done % cfg.record_every == 0 || done == steps) {
      const double t = (done == steps) ? cfg.T : done * dt;
      record(c, t);
      if (cfg.store_fields && done != steps) {
        traj.fields.push_back(Field::from_spectrum(u0.grid_ptr(), c));
        traj.field_times.push_back(t);
      }
    }
  }
  traj.steps = n;
  traj.fields.push_back(Field::from_spectrum(u0.grid_ptr(), c));
  traj.field_times.push_back(traj.blew_up ? n * dt : cfg.T);
  if (!traj.blew_up) traj.message = "completed";
  return traj;
}

Trajectory evolve_within(const Field& u0, EvolveConfig cfg, const DriftTolerances& tol,
                         int max_halvings) {
  Trajectory traj = evolve(u0, cfg);
  int halvings = 0;
  while (halvings < max_halvings &&
         (traj.blew_up || traj.mass_drift() > tol.mass || traj.energy_drift() > tol.energy)) {
    cfg.dt = 0.5 * traj.dt;
    cfg.record_every *= 2;
    traj = evolve(u0, cfg);
    ++halvings;
  }
  traj.halvings = halvings;
  return traj;
}

double traveling_frame_error(const Field& u0, double nu, double T, const EvolveConfig& cfg) {
  if (T == 0.0) return 0.0;
  EvolveConfig run = cfg;
  run.T = T;
  run.store_fields = false;
  const Trajectory traj = evolve(u0, run);
  if (traj.blew_up) throw std::domain_error("traveling_frame_error: " + traj.message);
  Spectrum c = traj.final_state().spectrum();
  spectral::translate(c, u0.grid(), -nu * T);
  const Spectrum c0 = u0.spectrum();
  Spectrum diff(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) diff[k] = c[k] - c0[k];
  const double den = spectral::inner(c0, c0, u0.grid().length());
  return std::sqrt(spectral::inner(diff, diff, u0.grid().length()) / den);
}

}  // namespace solwave
