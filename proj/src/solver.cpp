#include "solwave/solver.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

#include "solwave/probes.hpp"

namespace solwave {

namespace {

double l2_norm(const Model& model, std::span<const Complex> a) {
  return std::sqrt(std::max(0.0, model.inner(a, a)));
}

void scale(Spectrum& a, double c) {
  for (auto& z : a) z *= c;
}

/// Rescales a spectrum to mass mu in place.
void project(const Model& model, Spectrum& u, double mu) {
  const double q = model.mass(u);
  if (!(q > 0.0)) throw std::domain_error("project_mass: zero field");
  scale(u, std::sqrt(mu / q));
}

/// Linear resampling onto another grid, zero outside the source box.
Field resample(const Field& u, const GridPtr& target) {
  const Grid& src = u.grid();
  Field out(target);
  const double h = src.spacing();
  for (int j = 0; j < target->points(); ++j) {
    const double x = target->node(j);
    const double t = (x - src.node(0)) / h;
    if (t < 0.0 || t > src.points() - 1) continue;
    const int i = std::min(static_cast<int>(std::floor(t)), src.points() - 2);
    const double w = t - i;
    out[j] = (1.0 - w) * u[i] + w * u[i + 1];
  }
  return out;
}

/// Value, first and second derivative of the trigonometric interpolant at x.
struct PointEval {
  double value, d1, d2;
};

PointEval evaluate_at(const Grid& grid, std::span<const Complex> c, double x) {
  const double y = x - grid.node(0);
  const std::size_t m = c.size();
  PointEval e{c[0].real(), 0.0, 0.0};
  for (std::size_t k = 1; k < m; ++k) {
    const double xi = grid.wavenumber(static_cast<int>(k));
    const double w = (k + 1 == m) ? 1.0 : 2.0;
    const Complex a = (k + 1 == m) ? Complex(c[k].real(), 0.0) : c[k];
    const Complex ph(std::cos(xi * y), std::sin(xi * y));
    const Complex t = a * ph;
    e.value += w * t.real();
    e.d1 += w * (Complex(0.0, xi) * t).real();
    e.d2 += w * (-xi * xi * t).real();
  }
  return e;
}

WaveSolution finish(const Model& model, const Spectrum& u, const SolveConfig& cfg, Method method,
                    int iterations, bool reached, std::string message) {
  WaveSolution sol{Field::from_spectrum(model.grid_ptr(), u)};
  const auto ev = model.evaluate(u);
  Spectrum r = ev.gradient;
  for (std::size_t k = 0; k < r.size(); ++k) r[k] -= ev.nu * u[k];
  sol.nu = ev.nu;
  sol.mu = ev.values.mass;
  sol.values = ev.values;
  sol.residual_l2 = l2_norm(model, r);
  sol.iterations = iterations;
  sol.method = method;
  sol.subcritical = sol.nu < cfg.dispersive(0.0);
  sol.converged = reached && sol.subcritical;
  if (reached && !sol.subcritical) message += "; speed is not subcritical";
  sol.message = std::move(message);
  return sol;
}

}  // namespace

std::string to_string(Method m) {
  switch (m) {
    case Method::descent: return "descent";
    case Method::petviashvili: return "petviashvili";
    case Method::hybrid: return "hybrid";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  if (name == "descent") return Method::descent;
  if (name == "petviashvili") return Method::petviashvili;
  if (name == "hybrid") return Method::hybrid;
  throw std::invalid_argument("unknown method '" + name +
                              "' (expected descent, petviashvili or hybrid)");
}

GridPtr default_grid() { return make_grid(200.0 * std::numbers::pi, 4096); }

double SolveConfig::theta() const {
  if (theta0) return *theta0;
  return std::clamp(0.5 * mu, 1e-3, 1.0);
}

void require_admissible_exponents(double s, double r) {
  if (!(s > 0.0)) {
    throw std::invalid_argument("exponents violate s > 0, r < s - 1: s = " + std::to_string(s));
  }
  if (!(r < s - 1.0)) {
    throw std::invalid_argument("exponents violate s > 0, r < s - 1: r = " + std::to_string(r) +
                                " is not below s - 1 = " + std::to_string(s - 1.0));
  }
}

void SolveConfig::validate() const {
  require_admissible_exponents(s(), r());
  if (!(mu > 0.0)) throw std::invalid_argument("mu must be positive");
  if (!(tol_residual > 0.0) || !(tol_step > 0.0)) {
    throw std::invalid_argument("tolerances must be positive");
  }
  if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
  if (!grid) throw std::invalid_argument("SolveConfig requires a grid");
  const double th = theta();
  if (!(th > 0.0 && th <= 1.0)) throw std::invalid_argument("theta0 must lie in (0, 1]");
}

Field project_mass(const Field& u, double mu) {
  const double q = mass(u);
  if (!(q > 0.0)) throw std::domain_error("project_mass: zero field");
  return u * std::sqrt(mu / q);
}

Field longwave_ansatz(const GridPtr& grid, double mu, double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) throw std::invalid_argument("theta must lie in (0, 1]");
  // phi(x) = c exp(-x^2/2) with Q(phi) = 1, i.e. c^2 = 2/sqrt(pi)
  const double c = std::sqrt(2.0 / std::sqrt(std::numbers::pi));
  Field phi = Field::from_function(grid, [&](double x) {
    const double y = theta * x;
    return std::sqrt(theta) * c * std::exp(-0.5 * y * y);
  });
  return project_mass(phi, mu);
}

Field longwave_initial_guess(const SolveConfig& cfg) {
  return longwave_ansatz(cfg.grid, cfg.mu, cfg.theta());
}

WaveSolution constrained_descent(const SolveConfig& cfg, const Field& u0) {
  cfg.validate();
  if (!(u0.max_abs() > 0.0)) throw std::invalid_argument("constrained_descent: zero initial field");
  const Model model(u0.grid_ptr(), cfg.dispersive, cfg.nonlinear);
  const double length = model.grid().length();
  const auto m = model.dispersive_weights();
  const double m0 = cfg.dispersive(0.0);

  Spectrum u = u0.spectrum();
  project(model, u, cfg.mu);
  auto ev = model.evaluate(u);

  // Metric P = (m - m(0) + sigma)^{-1}; sigma estimates m(0) - nu near the
  // minimizer (2N/Q bounds it from above).
  const double sigma = std::max(2.0 * ev.values.nonlinearity / ev.values.mass, 1e-8);
  std::vector<double> p(m.size());
  std::vector<double> inv_p(m.size());
  for (std::size_t k = 0; k < m.size(); ++k) {
    inv_p[k] = std::max(m[k] - m0, 0.0) + sigma;
    p[k] = 1.0 / inv_p[k];
  }

  auto direction = [&](const Model::Evaluation& e, Spectrum& d, Spectrum& tangent) {
    // d = P(g - lambda u) with <d, u> = 0; tangent = g - lambda u
    Spectrum pu(u.size());
    d.resize(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) {
      d[k] = p[k] * e.gradient[k];
      pu[k] = p[k] * u[k];
    }
    const double lambda = model.inner(d, u) / model.inner(pu, u);
    tangent.resize(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) {
      d[k] -= lambda * pu[k];
      tangent[k] = e.gradient[k] - lambda * u[k];
    }
  };

  auto residual_norm = [&](const Model::Evaluation& e, const Spectrum& v) {
    Spectrum r = e.gradient;
    for (std::size_t k = 0; k < r.size(); ++k) r[k] -= e.nu * v[k];
    return l2_norm(model, r);
  };

  Spectrum d, tangent;
  direction(ev, d, tangent);
  std::deque<double> history{ev.values.energy};
  double tau = 1.0;
  int it = 0;
  std::string message = "iteration limit reached";
  bool reached = false;

  for (; it < cfg.max_iter; ++it) {
    if (residual_norm(ev, u) <= cfg.tol_residual) {
      reached = true;
      message = "residual tolerance reached";
      break;
    }
    const double slope = spectral::weighted_norm2(tangent, p, length);
    if (!(slope > 0.0)) {
      message = "no descent direction";
      break;
    }
    const double reference = *std::max_element(history.begin(), history.end());
    Spectrum trial(u.size());
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      for (std::size_t k = 0; k < u.size(); ++k) trial[k] = u[k] - tau * d[k];
      project(model, trial, cfg.mu);
      const double e_trial = model.dispersion(trial) - model.nonlinearity(trial);
      // energy differences below round-off cannot be resolved
      const double slack = 8.0 * std::numeric_limits<double>::epsilon() * std::abs(reference);
      if (e_trial <= reference - 1e-4 * tau * slope + slack) {
        accepted = true;
        break;
      }
      tau *= 0.5;
    }
    if (!accepted) {
      message = "line search failed";
      break;
    }

    Spectrum step(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) step[k] = trial[k] - u[k];
    const double step_norm = l2_norm(model, step);
    u = std::move(trial);
    const Spectrum old_tangent = tangent;
    ev = model.evaluate(u);
    direction(ev, d, tangent);
    history.push_back(ev.values.energy);
    if (static_cast<int>(history.size()) > cfg.nonmonotone_window) history.pop_front();

    if (step_norm <= cfg.tol_step) {
      reached = residual_norm(ev, u) <= cfg.tol_residual;
      message = "step tolerance reached";
      ++it;
      break;
    }

    // Barzilai-Borwein step in the P^{-1} metric, alternating the two ratios
    Spectrum y(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) y[k] = tangent[k] - old_tangent[k];
    const double sy = model.inner(step, y);
    double next = tau * 2.0;
    if (sy > 0.0) {
      next = (it % 2 == 0) ? spectral::weighted_norm2(step, inv_p, length) / sy
                           : sy / spectral::weighted_norm2(y, p, length);
    }
    tau = std::clamp(next, 1e-6, 1e3);
  }
  return finish(model, u, cfg, Method::descent, it, reached, message);
}

double stabilizing_factor(const Field& u, double nu, const SolveConfig& cfg) {
  const Model model(u.grid_ptr(), cfg.dispersive, cfg.nonlinear);
  const Spectrum c = u.spectrum();
  const auto m = model.dispersive_weights();
  Spectrum lu(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) lu[k] = (m[k] - nu) * c[k];
  return model.inner(lu, c) / model.inner(model.cubic(c), c);
}

WaveSolution petviashvili(double nu, const SolveConfig& cfg, const Field& u0) {
  cfg.validate();
  const Model model(u0.grid_ptr(), cfg.dispersive, cfg.nonlinear);
  const auto m = model.dispersive_weights();
  const double floor = *std::min_element(m.begin(), m.end());
  if (!(nu < floor)) {
    throw std::invalid_argument("petviashvili: speed " + std::to_string(nu) +
                                " must lie below the minimum of the dispersive symbol (" +
                                std::to_string(floor) + ")");
  }
  Spectrum u = u0.spectrum();
  int it = 0;
  bool reached = false;
  std::string message = "iteration limit reached";
  for (; it < cfg.max_iter; ++it) {
    const auto ev = model.evaluate(u);
    Spectrum lu(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) lu[k] = (m[k] - nu) * u[k];
    const double num = model.inner(lu, u);
    const double den = model.inner(ev.cubic, u);
    if (!(den > 0.0) || !(num > 0.0)) {
      message = "stabilizing factor is not positive";
      break;
    }
    const double factor = num / den;
    Spectrum r(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) r[k] = lu[k] - ev.cubic[k];
    if (std::abs(factor - 1.0) <= cfg.tol_step && l2_norm(model, r) <= cfg.tol_residual) {
      reached = true;
      message = "converged";
      break;
    }
    const double gain = factor * std::sqrt(factor);
    for (std::size_t k = 0; k < u.size(); ++k) u[k] = gain * ev.cubic[k] / (m[k] - nu);
  }
  WaveSolution sol = finish(model, u, cfg, Method::petviashvili, it, reached, message);
  // The Rayleigh quotient equals nu at a fixed point; report the residual at
  // the prescribed speed so the two agree with the stopping rule.
  sol.residual_l2 = l2_norm(model, model.residual(u, nu));
  sol.nu = nu;
  sol.subcritical = nu < cfg.dispersive(0.0);
  sol.converged = reached && sol.subcritical;
  return sol;
}

WaveSolution preconditioned_refine(const WaveSolution& sol, const SolveConfig& cfg) {
  const Model model(sol.u.grid_ptr(), cfg.dispersive, cfg.nonlinear);
  const auto m = model.dispersive_weights();
  const double target = model.mass(sol.u.spectrum());
  const int modes = model.grid().modes();

  auto residual_of = [&](const Model::Evaluation& e, const Spectrum& v) {
    Spectrum r = e.gradient;
    for (std::size_t k = 0; k < r.size(); ++k) r[k] -= e.nu * v[k];
    return l2_norm(model, r);
  };
  // fixed-point map G(u) = (m - nu + 1)^{-1} (u n u^2 + u), mass restored
  auto apply_map = [&](const Spectrum& v, const Model::Evaluation& e) {
    Spectrum next(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) next[k] = (e.cubic[k] + v[k]) / (m[k] - e.nu + 1.0);
    project(model, next, target);
    return next;
  };
  // real coordinates in which the Euclidean norm is the L^2 norm / L
  auto to_vec = [&](const Spectrum& v) {
    Eigen::VectorXd x(2 * modes);
    for (int k = 0; k < modes; ++k) {
      const double w = (k == 0 || k == modes - 1) ? 1.0 : std::numbers::sqrt2;
      x[2 * k] = w * v[k].real();
      x[2 * k + 1] = w * v[k].imag();
    }
    return x;
  };
  auto from_vec = [&](const Eigen::VectorXd& x) {
    Spectrum v(modes);
    for (int k = 0; k < modes; ++k) {
      const double w = (k == 0 || k == modes - 1) ? 1.0 : std::numbers::sqrt2;
      v[k] = Complex(x[2 * k], x[2 * k + 1]) / w;
    }
    v.front().imag(0.0);
    v.back().imag(0.0);
    return v;
  };

  Spectrum u = sol.u.spectrum();
  auto ev = model.evaluate(u);
  double best = residual_of(ev, u);
  const double start = best;
  Spectrum best_u = u;

  // Anderson mixing of depth kDepth on G; same fixed points, faster than
  // plain sweeps when m(0) - nu is small.
  constexpr int kDepth = 5;
  constexpr int kPatience = 10;
  std::deque<Eigen::VectorXd> dg, df;
  Eigen::VectorXd g_prev, f_prev;
  int sweeps = 0, stale = 0;
  for (; sweeps < cfg.max_iter && best > cfg.tol_residual && stale < kPatience; ++sweeps) {
    const Eigen::VectorXd g = to_vec(apply_map(u, ev));
    const Eigen::VectorXd f = g - to_vec(u);
    if (g_prev.size() > 0) {
      dg.push_back(g - g_prev);
      df.push_back(f - f_prev);
      if (static_cast<int>(dg.size()) > kDepth) {
        dg.pop_front();
        df.pop_front();
      }
    }
    g_prev = g;
    f_prev = f;
    Eigen::VectorXd x = g;
    if (!df.empty()) {
      Eigen::MatrixXd F(f.size(), df.size()), G(g.size(), dg.size());
      for (std::size_t j = 0; j < df.size(); ++j) {
        F.col(j) = df[j];
        G.col(j) = dg[j];
      }
      const Eigen::VectorXd gamma = F.colPivHouseholderQr().solve(f);
      if (gamma.allFinite()) x = g - G * gamma;
    }
    Spectrum next = from_vec(x);
    project(model, next, target);
    auto ev_next = model.evaluate(next);
    const double res = residual_of(ev_next, next);
    if (!std::isfinite(res) || res > 1e3 * best) {
      // mixing went astray: restart from the best iterate
      dg.clear();
      df.clear();
      g_prev.resize(0);
      u = best_u;
      ev = model.evaluate(u);
      ++stale;
      continue;
    }
    u = std::move(next);
    ev = std::move(ev_next);
    if (res < best) {
      best = res;
      best_u = u;
      stale = 0;
    } else {
      ++stale;
    }
  }
  if (!(best < start)) {
    WaveSolution same = sol;
    same.no_progress = true;
    same.message = "refinement made no progress";
    return same;
  }
  return finish(model, best_u, cfg, sol.method, sol.iterations + sweeps, best <= cfg.tol_residual,
                "refined");
}

RecentreResult recentre(const Field& u, bool evenize) {
  const Grid& grid = u.grid();
  const int n = grid.points();
  int peak = 0;
  double lo = std::abs(u[0]), hi = std::abs(u[0]);
  for (int j = 1; j < n; ++j) {
    const double a = std::abs(u[j]);
    if (a > hi) {
      hi = a;
      peak = j;
    }
    lo = std::min(lo, a);
  }
  if (!(hi > 0.0) || hi - lo <= 1e-14 * hi) return {u, 0.0, true};

  const double sign = u[peak] >= 0.0 ? 1.0 : -1.0;
  const double a = sign * u[(peak + n - 1) % n];
  const double b = sign * u[peak];
  const double c = sign * u[(peak + 1) % n];
  const double curvature = a - 2.0 * b + c;
  double offset = curvature < 0.0 ? 0.5 * (a - c) / curvature : 0.0;
  offset = std::clamp(offset, -0.5, 0.5);
  double x = grid.node(peak) + offset * grid.spacing();

  // Newton polish of u'(x) = 0 on the trigonometric interpolant
  Spectrum coeffs = u.spectrum();
  for (int it = 0; it < 8; ++it) {
    const PointEval e = evaluate_at(grid, coeffs, x);
    if (!(e.d2 * sign < 0.0)) break;
    const double dx = -e.d1 / e.d2;
    if (std::abs(dx) > grid.spacing()) break;
    x += dx;
    if (std::abs(dx) <= 1e-15 * grid.length()) break;
  }

  Field out = u;
  if (x != 0.0) {
    spectral::translate(coeffs, grid, -x);
    out = Field::from_spectrum(u.grid_ptr(), coeffs);
  }
  if (evenize) {
    Field mirrored = out;
    for (int j = 0; j < n; ++j) mirrored[j] = 0.5 * (out[j] + out[(n - j) % n]);
    out = std::move(mirrored);
  }
  return {std::move(out), x, false};
}

WaveSolution assess(const Field& u, const SolveConfig& cfg, Method method, int iterations) {
  const Model model(u.grid_ptr(), cfg.dispersive, cfg.nonlinear);
  const Spectrum c = u.spectrum();
  const auto ev = model.evaluate(c);
  Spectrum r = ev.gradient;
  for (std::size_t k = 0; k < r.size(); ++k) r[k] -= ev.nu * c[k];
  const double res = l2_norm(model, r);
  return finish(model, c, cfg, method, iterations, res <= cfg.tol_residual, "assessed");
}

namespace {

WaveSolution run_method(const SolveConfig& cfg, const Field& u0) {
  switch (cfg.method) {
    case Method::descent: return constrained_descent(cfg, u0);
    case Method::petviashvili: {
      if (!cfg.speed) throw std::invalid_argument("petviashvili requires a prescribed speed");
      return petviashvili(*cfg.speed, cfg, u0);
    }
    case Method::hybrid: {
      WaveSolution sol = constrained_descent(cfg, u0);
      if (sol.residual_l2 > cfg.tol_residual) {
        sol = preconditioned_refine(sol, cfg);
      }
      sol.method = Method::hybrid;
      return sol;
    }
  }
  throw std::logic_error("unreachable");
}

/// Largest |c_k| with |xi_k| >= fraction * xi_max, relative to the peak.
double band_ratio(const Field& u, double fraction) {
  const Spectrum c = u.spectrum();
  double peak = 0.0, band = 0.0;
  const int start = static_cast<int>(std::ceil(fraction * (c.size() - 1)));
  for (std::size_t k = 0; k < c.size(); ++k) {
    const double a = std::abs(c[k]);
    peak = std::max(peak, a);
    if (static_cast<int>(k) >= start) band = std::max(band, a);
  }
  return peak > 0.0 ? band / peak : 0.0;
}

WaveSolution finalize(WaveSolution sol, const SolveConfig& cfg) {
  const bool converged = sol.converged;
  const std::string message = sol.message;
  const bool no_progress = sol.no_progress;
  RecentreResult centred = recentre(sol.u, cfg.evenize);
  WaveSolution out = assess(centred.u, cfg, sol.method, sol.iterations);
  if (sol.method == Method::petviashvili) {
    // keep the prescribed speed and its residual
    const Model model(out.u.grid_ptr(), cfg.dispersive, cfg.nonlinear);
    out.nu = sol.nu;
    out.residual_l2 = l2_norm(model, model.residual(out.u.spectrum(), sol.nu));
  }
  out.converged = converged && out.subcritical;
  out.message = message;
  out.no_progress = no_progress;
  return out;
}

}  // namespace

WaveSolution solve(const SolveConfig& cfg, const std::optional<Field>& u0) {
  cfg.validate();
  SolveConfig current = cfg;
  Field start = u0 ? *u0 : longwave_initial_guess(cfg);
  if (u0 && !(u0->grid() == *cfg.grid)) start = resample(*u0, cfg.grid);
  current.grid = start.grid_ptr();

  WaveSolution sol = finalize(run_method(current, start), current);
  for (int grow = 0; cfg.auto_enlarge && grow < cfg.max_enlargements; ++grow) {
    if (tail_mass(sol.u) <= 1e-10 * sol.mu) break;
    const Grid& g = sol.u.grid();
    // Doubling L at fixed N halves the band; double N too unless the upper
    // half of the current band is already at round-off.
    const int points = band_ratio(sol.u, 0.375) > 1e-13 ? 2 * g.points() : g.points();
    current.grid = make_grid(2.0 * g.length(), points);
    Field warm = resample(sol.u, current.grid);
    if (cfg.method == Method::petviashvili) {
      sol = finalize(run_method(current, warm), current);
    } else {
      sol = finalize(run_method(current, project_mass(warm, cfg.mu)), current);
    }
  }
  return sol;
}

SweepRecord make_record(const WaveSolution& sol, const SolveConfig& cfg) {
  SweepRecord rec;
  rec.mu = sol.mu;
  rec.nu = sol.nu;
  rec.speed_gap = cfg.dispersive(0.0) - sol.nu;
  rec.h_half_s_norm = sobolev_norm(sol.u, 0.5 * cfg.s());
  rec.sup_norm = sol.u.max_abs();
  rec.nonlinearity = sol.values.nonlinearity;
  rec.energy = sol.values.energy;
  rec.residual_l2 = sol.residual_l2;
  rec.tail_mass = tail_mass(sol.u);
  rec.iterations = sol.iterations;
  rec.converged = sol.converged;
  return rec;
}

SweepResult continuation_sweep(const SolveConfig& cfg) {
  if (cfg.continuation.empty()) throw std::invalid_argument("continuation list is empty");
  if (cfg.method == Method::petviashvili) {
    throw std::invalid_argument("continuation in mu needs a mass-constrained method");
  }
  for (std::size_t i = 0; i < cfg.continuation.size(); ++i) {
    if (!(cfg.continuation[i] > 0.0)) throw std::invalid_argument("continuation values must be > 0");
    if (i > 0 && !(cfg.continuation[i] > cfg.continuation[i - 1])) {
      throw std::invalid_argument("continuation list must be sorted ascending");
    }
  }
  SweepResult out;
  std::optional<Field> warm;
  SolveConfig step = cfg;
  for (double mu : cfg.continuation) {
    step.mu = mu;
    step.theta0 = cfg.theta0;
    std::optional<Field> guess;
    if (warm) guess = project_mass(*warm, mu);
    WaveSolution sol = solve(step, guess);
    // the first solve settles the box; later solves reuse it
    step.grid = sol.u.grid_ptr();
    step.auto_enlarge = cfg.auto_enlarge && !warm.has_value();
    if (sol.converged) warm = sol.u;
    else if (!warm) warm = sol.u;
    out.records.push_back(make_record(sol, cfg));
    out.solutions.push_back(std::move(sol));
  }
  return out;
}

}  // namespace solwave
