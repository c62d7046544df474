#pragma once

#include <span>
#include <vector>

#include "solwave/field.hpp"
#include "solwave/spectral.hpp"
#include "solwave/symbol.hpp"

namespace solwave {

/// Q, L, N~ and E~ = L - N~ for one profile.
struct FunctionalValues {
  double mass = 0.0;
  double dispersion = 0.0;
  double nonlinearity = 0.0;
  double energy = 0.0;
};

/// The variational problem on a fixed grid: dispersive symbol m, nonlinear
/// symbol n, and the derived functionals
///   Q(u) = 1/2 <u, u>,  L(u) = 1/2 <u, m u>,  N(u) = 1/4 <u^2, n u^2>,
/// with u^2 formed by a dealiased product. Works on half-spectra.
///
/// Holds scratch buffers, so one instance must not be shared across threads.
class Model {
 public:
  Model(GridPtr grid, Symbol dispersive, Symbol nonlinear);

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  const Symbol& dispersive() const { return disp_; }
  const Symbol& nonlinear() const { return nl_; }
  std::span<const double> dispersive_weights() const { return disp_w_; }
  std::span<const double> nonlinear_weights() const { return nl_w_; }

  double inner(std::span<const Complex> a, std::span<const Complex> b) const;
  double mass(std::span<const Complex> u) const;
  double dispersion(std::span<const Complex> u) const;

  /// Truncated spectrum of u^2.
  Spectrum square(std::span<const Complex> u) const;
  double nonlinearity(std::span<const Complex> u) const;
  FunctionalValues values(std::span<const Complex> u) const;

  /// u n(D) u^2, dealiased.
  Spectrum cubic(std::span<const Complex> u) const;

  struct Evaluation {
    FunctionalValues values;
    Spectrum cubic;     // u n(D) u^2
    Spectrum gradient;  // m(D) u - u n(D) u^2
    double nu = 0.0;    // <gradient, u> / <u, u>
  };
  Evaluation evaluate(std::span<const Complex> u) const;

  /// -nu u + m(D) u - u n(D) u^2
  Spectrum residual(std::span<const Complex> u, double nu) const;

 private:
  GridPtr grid_;
  Symbol disp_;
  Symbol nl_;
  std::vector<double> disp_w_;
  std::vector<double> nl_w_;
  spectral::Dealiaser dealias_;
  mutable std::vector<double> pad_u_;
  mutable std::vector<double> pad_w_;
};

double mass(const Field& u);
double dispersion(const Field& u, const Symbol& disp);
double nonlocal_quartic(const Field& u, const Symbol& nl);
FunctionalValues energy(const Field& u, const Symbol& disp, const Symbol& nl);

/// Frechet derivative of E~: m(D) u - u n(D) u^2.
Field gradient_energy(const Field& u, const Symbol& disp, const Symbol& nl);

/// -nu u + m(D) u - u n(D) u^2
Field el_residual(const Field& u, double nu, const Symbol& disp, const Symbol& nl);

/// nu = (2L - 4N~) / (2Q); makes the residual orthogonal to u.
/// Throws std::domain_error for the zero field.
double wave_speed_rayleigh(const Field& u, const Symbol& disp, const Symbol& nl);

}  // namespace solwave
