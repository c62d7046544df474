#pragma once

#include <optional>
#include <string>
#include <vector>

#include "solwave/field.hpp"
#include "solwave/functionals.hpp"
#include "solwave/symbol.hpp"

namespace solwave {

enum class Method { descent, petviashvili, hybrid };

std::string to_string(Method m);
Method parse_method(const std::string& name);

/// Default box: L = 200 pi, N = 4096.
GridPtr default_grid();

struct SolveConfig {
  double mu = 0.4;
  Symbol dispersive = Symbol::bessel(2.0);
  Symbol nonlinear = Symbol::bessel(0.0);
  GridPtr grid = default_grid();
  Method method = Method::descent;
  /// Long-wave ansatz scale in (0, 1]; defaults to min(1, mu/2).
  std::optional<double> theta0;
  /// Prescribed speed for the Petviashvili iteration.
  std::optional<double> speed;
  double tol_residual = 1e-10;
  double tol_step = 1e-13;
  int max_iter = 5000;
  std::vector<double> continuation;
  bool evenize = false;
  /// Double the box while the tail mass exceeds 1e-10 mu.
  bool auto_enlarge = true;
  int max_enlargements = 4;
  int nonmonotone_window = 8;

  double s() const { return dispersive.order(); }
  double r() const { return nonlinear.order(); }
  double theta() const;

  /// Throws std::invalid_argument for s <= 0, r >= s - 1, or bad tolerances.
  void validate() const;
};

/// Throws std::invalid_argument unless s > 0 and r < s - 1.
void require_admissible_exponents(double s, double r);

struct WaveSolution {
  Field u;
  double nu = 0.0;
  double mu = 0.0;
  double residual_l2 = 0.0;
  int iterations = 0;
  FunctionalValues values;
  Method method = Method::descent;
  bool converged = false;
  /// nu below m(0); a converged solution that is not subcritical is
  /// reported as not converged.
  bool subcritical = false;
  bool no_progress = false;
  std::string message;
};

/// sqrt(theta) phi(theta x) for the unit-mass Gaussian phi, rescaled to mass mu.
Field longwave_ansatz(const GridPtr& grid, double mu, double theta);

Field longwave_initial_guess(const SolveConfig& cfg);

/// u * sqrt(mu / Q(u)). Throws std::domain_error for the zero field.
Field project_mass(const Field& u, double mu);

/// Projected-gradient minimization of E~ on {Q = mu}.
WaveSolution constrained_descent(const SolveConfig& cfg, const Field& u0);

/// M(u) = <(m(D) - nu) u, u> / <u n(D) u^2, u>; equals 1 at a solution.
double stabilizing_factor(const Field& u, double nu, const SolveConfig& cfg);

/// Stabilized fixed-point iteration at fixed speed nu; mu is an output.
WaveSolution petviashvili(double nu, const SolveConfig& cfg, const Field& u0);

/// Fixed-point polish u <- (m(D) - nu + 1)^{-1} (u n(D) u^2 + u) with the
/// speed re-estimated and the mass restored every sweep.
WaveSolution preconditioned_refine(const WaveSolution& sol, const SolveConfig& cfg);

struct RecentreResult {
  Field u;
  double peak_position = 0.0;
  bool degenerate = false;
};

/// Translates u so its extremum sits at x = 0 (sub-grid accurate).
RecentreResult recentre(const Field& u, bool evenize = false);

/// Full pipeline: initial guess (or `u0`), method dispatch, box enlargement,
/// recentring.
WaveSolution solve(const SolveConfig& cfg, const std::optional<Field>& u0 = std::nullopt);

/// Recomputes nu, residual, functional values and flags for `u`.
WaveSolution assess(const Field& u, const SolveConfig& cfg, Method method, int iterations);

/// Per-mu diagnostics collected along a continuation sweep.
struct SweepRecord {
  double mu = 0.0;
  double nu = 0.0;
  /// m(0) - nu (1 - nu for Bessel dispersion).
  double speed_gap = 0.0;
  double h_half_s_norm = 0.0;
  double sup_norm = 0.0;
  double nonlinearity = 0.0;
  double energy = 0.0;
  double residual_l2 = 0.0;
  double tail_mass = 0.0;
  int iterations = 0;
  bool converged = false;
};

SweepRecord make_record(const WaveSolution& sol, const SolveConfig& cfg);

struct SweepResult {
  std::vector<WaveSolution> solutions;
  std::vector<SweepRecord> records;
};

/// Solves the smallest mu from the ansatz and warm-starts each next mu from
/// the previous solution rescaled to the new mass.
SweepResult continuation_sweep(const SolveConfig& cfg);

}  // namespace solwave
