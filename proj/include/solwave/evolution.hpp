#pragma once

#include <string>
#include <vector>

#include "solwave/field.hpp"
#include "solwave/functionals.hpp"
#include "solwave/symbol.hpp"

namespace solwave {

struct EvolveConfig {
  /// Time step; 0 selects 0.1 of the stability ceiling (see stability_ceiling).
  double dt = 0.0;
  double T = 1.0;
  Symbol dispersive = Symbol::bessel(2.0);
  Symbol nonlinear = Symbol::bessel(0.0);
  int record_every = 100;
  /// Keep the field at every recorded step, not only at start and end.
  bool store_fields = false;
};

/// exp(-i xi_k m(xi_k) dt) per half-spectrum mode.
std::vector<Complex> linear_propagator(double dt, const Symbol& disp, const Grid& grid);

/// 1 / (||u0||_inf^2 max|n(xi_k)| max|xi_k|): the explicit-part time scale.
/// Infinite when the nonlinear term vanishes.
double stability_ceiling(const Field& u0, const Symbol& nl);

/// Fourth-order exponential time differencing (Cox-Matthews ETDRK4) for
/// u_t + (m(D) u - u n(D) u^2)_x = 0; the linear part is integrated exactly.
class Integrator {
 public:
  Integrator(GridPtr grid, const Symbol& disp, const Symbol& nl, double dt);

  double dt() const { return dt_; }
  const Model& model() const { return model_; }

  /// One step in place on a half-spectrum.
  void advance(Spectrum& u) const;

 private:
  Spectrum nonlinear_term(const Spectrum& u) const;

  GridPtr grid_;
  Model model_;
  double dt_;
  std::vector<Complex> e_, e2_, q_, f1_, f2_, f3_;
};

/// One step of size cfg.dt (which must be positive here).
/// Throws std::domain_error if the result is not finite.
Field step(const Field& u, const EvolveConfig& cfg);

struct Snapshot {
  double time = 0.0;
  double mass = 0.0;
  double energy = 0.0;
};

struct Trajectory {
  std::vector<Snapshot> series;
  /// Stored states (start and end, or every record when store_fields).
  std::vector<double> field_times;
  std::vector<Field> fields;
  double dt = 0.0;
  int steps = 0;
  /// Step halvings applied by evolve_within.
  int halvings = 0;
  bool blew_up = false;
  std::string message;

  const Field& final_state() const { return fields.back(); }
  double mass_drift() const;
  double energy_drift() const;
};

/// Steps to time T (the step is shrunk so T is hit exactly) recording Q and
/// E~ every record_every steps. Blow-up stops the run and keeps the last
/// finite state.
Trajectory evolve(const Field& u0, const EvolveConfig& cfg);

struct DriftTolerances {
  double mass = 1e-10;
  double energy = 1e-8;
};

/// evolve() with the step halved until the relative Q and E~ drifts meet
/// `tol` (at most `max_halvings` times). The last attempt is returned even
/// if it still misses the tolerances.
Trajectory evolve_within(const Field& u0, EvolveConfig cfg, const DriftTolerances& tol,
                         int max_halvings = 8);

/// Relative L^2 distance between u0 and the evolved state shifted back by
/// nu T.
double traveling_frame_error(const Field& u0, double nu, double T, const EvolveConfig& cfg);

}  // namespace solwave
