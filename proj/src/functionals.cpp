#include "solwave/functionals.hpp"

#include <cmath>
#include <stdexcept>

namespace solwave {

Model::Model(GridPtr grid, Symbol dispersive, Symbol nonlinear)
    : grid_(std::move(grid)),
      disp_(std::move(dispersive)),
      nl_(std::move(nonlinear)),
      disp_w_(disp_.weights(*grid_)),
      nl_w_(nl_.weights(*grid_)),
      dealias_(grid_->points()) {}

double Model::inner(std::span<const Complex> a, std::span<const Complex> b) const {
  return spectral::inner(a, b, grid_->length());
}

double Model::mass(std::span<const Complex> u) const { return 0.5 * inner(u, u); }

double Model::dispersion(std::span<const Complex> u) const {
  return 0.5 * spectral::weighted_norm2(u, disp_w_, grid_->length());
}

Spectrum Model::square(std::span<const Complex> u) const {
  dealias_.pad_to_values(u, pad_u_);
  pad_w_.resize(pad_u_.size());
  for (std::size_t j = 0; j < pad_u_.size(); ++j) pad_w_[j] = pad_u_[j] * pad_u_[j];
  Spectrum sq;
  dealias_.values_to_truncated(pad_w_, sq);
  return sq;
}

double Model::nonlinearity(std::span<const Complex> u) const {
  const Spectrum sq = square(u);
  return 0.25 * spectral::weighted_norm2(sq, nl_w_, grid_->length());
}

FunctionalValues Model::values(std::span<const Complex> u) const {
  FunctionalValues v;
  v.mass = mass(u);
  v.dispersion = dispersion(u);
  v.nonlinearity = nonlinearity(u);
  v.energy = v.dispersion - v.nonlinearity;
  return v;
}

Spectrum Model::cubic(std::span<const Complex> u) const { return evaluate(u).cubic; }

Model::Evaluation Model::evaluate(std::span<const Complex> u) const {
  Evaluation ev;
  Spectrum sq = square(u);  // leaves the padded u in pad_u_
  ev.values.mass = mass(u);
  ev.values.dispersion = dispersion(u);
  ev.values.nonlinearity = 0.25 * spectral::weighted_norm2(sq, nl_w_, grid_->length());
  ev.values.energy = ev.values.dispersion - ev.values.nonlinearity;

  spectral::multiply(sq, nl_w_);
  std::vector<double> padded_u = pad_u_;
  dealias_.pad_to_values(sq, pad_w_);
  for (std::size_t j = 0; j < pad_w_.size(); ++j) pad_w_[j] *= padded_u[j];
  dealias_.values_to_truncated(pad_w_, ev.cubic);

  ev.gradient.resize(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) ev.gradient[k] = disp_w_[k] * u[k] - ev.cubic[k];
  const double uu = inner(u, u);
  ev.nu = uu > 0.0 ? inner(ev.gradient, u) / uu : 0.0;
  return ev;
}

Spectrum Model::residual(std::span<const Complex> u, double nu) const {
  Spectrum r = evaluate(u).gradient;
  for (std::size_t k = 0; k < u.size(); ++k) r[k] -= nu * u[k];
  return r;
}

double mass(const Field& u) {
  double sum = 0.0;
  for (double v : u.values()) sum += v * v;
  return 0.5 * sum * u.grid().spacing();
}

double dispersion(const Field& u, const Symbol& disp) {
  return 0.5 * spectral::weighted_norm2(u.spectrum(), disp.weights(u.grid()), u.grid().length());
}

double nonlocal_quartic(const Field& u, const Symbol& nl) {
  return Model(u.grid_ptr(), Symbol::bessel(0.0), nl).nonlinearity(u.spectrum());
}

FunctionalValues energy(const Field& u, const Symbol& disp, const Symbol& nl) {
  return Model(u.grid_ptr(), disp, nl).values(u.spectrum());
}

Field gradient_energy(const Field& u, const Symbol& disp, const Symbol& nl) {
  Model model(u.grid_ptr(), disp, nl);
  return Field::from_spectrum(u.grid_ptr(), model.evaluate(u.spectrum()).gradient);
}

Field el_residual(const Field& u, double nu, const Symbol& disp, const Symbol& nl) {
  Model model(u.grid_ptr(), disp, nl);
  return Field::from_spectrum(u.grid_ptr(), model.residual(u.spectrum(), nu));
}

double wave_speed_rayleigh(const Field& u, const Symbol& disp, const Symbol& nl) {
  const auto v = energy(u, disp, nl);
  if (!(v.mass > 0.0)) throw std::domain_error("wave_speed_rayleigh: zero field");
  return (2.0 * v.dispersion - 4.0 * v.nonlinearity) / (2.0 * v.mass);
}

}  // namespace solwave
