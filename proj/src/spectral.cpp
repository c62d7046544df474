#include "solwave/spectral.hpp"

#include <cmath>
#include <stdexcept>

namespace solwave {

namespace spectral {

double inner(std::span<const Complex> a, std::span<const Complex> b, double length) {
  const std::size_t m = a.size();
  if (b.size() != m || m < 2) throw std::invalid_argument("spectral::inner: size mismatch");
  double sum = 0.0;
  for (std::size_t k = 1; k + 1 < m; ++k) {
    sum += a[k].real() * b[k].real() + a[k].imag() * b[k].imag();
  }
  sum *= 2.0;
  sum += a[0].real() * b[0].real() + a[m - 1].real() * b[m - 1].real();
  return sum * length;
}

double weighted_norm2(std::span<const Complex> a, std::span<const double> weights,
                      double length) {
  const std::size_t m = a.size();
  if (weights.size() != m || m < 2) {
    throw std::invalid_argument("spectral::weighted_norm2: size mismatch");
  }
  double sum = 0.0;
  for (std::size_t k = 1; k + 1 < m; ++k) sum += weights[k] * std::norm(a[k]);
  sum *= 2.0;
  sum += weights[0] * a[0].real() * a[0].real();
  sum += weights[m - 1] * a[m - 1].real() * a[m - 1].real();
  return sum * length;
}

void multiply(std::span<Complex> a, std::span<const double> weights) {
  if (weights.size() != a.size()) throw std::invalid_argument("spectral::multiply: size mismatch");
  for (std::size_t k = 0; k < a.size(); ++k) a[k] *= weights[k];
}

void differentiate(std::span<Complex> a, const Grid& grid) {
  const std::size_t m = a.size();
  for (std::size_t k = 0; k + 1 < m; ++k) {
    a[k] *= Complex(0.0, grid.wavenumber(static_cast<int>(k)));
  }
  a[m - 1] = 0.0;
}

void translate(std::span<Complex> a, const Grid& grid, double shift) {
  const std::size_t m = a.size();
  for (std::size_t k = 1; k + 1 < m; ++k) {
    const double phase = -grid.wavenumber(static_cast<int>(k)) * shift;
    a[k] *= Complex(std::cos(phase), std::sin(phase));
  }
  a[m - 1] = a[m - 1].real() * std::cos(grid.wavenumber(static_cast<int>(m - 1)) * shift);
}

Dealiaser::Dealiaser(int points) : n_(points), fine_(RealFft::of(2 * points)) {
  buffer_.assign(n_ + 1, Complex{});
}

void Dealiaser::pad_to_values(std::span<const Complex> coeffs, std::vector<double>& values) const {
  if (static_cast<int>(coeffs.size()) != n_ / 2 + 1) {
    throw std::invalid_argument("Dealiaser: spectrum size mismatch");
  }
  std::fill(buffer_.begin(), buffer_.end(), Complex{});
  for (int k = 0; k < n_ / 2; ++k) buffer_[k] = coeffs[k];
  // the coarse Nyquist mode is a cosine: split it over +-N/2
  buffer_[n_ / 2] = 0.5 * coeffs[n_ / 2].real();
  values.resize(2 * n_);
  fine_.inverse(buffer_, values);
}

void Dealiaser::values_to_truncated(std::span<const double> values, Spectrum& coeffs) const {
  fine_.forward(values, buffer_);
  coeffs.resize(n_ / 2 + 1);
  for (int k = 0; k < n_ / 2; ++k) coeffs[k] = buffer_[k];
  coeffs[n_ / 2] = 2.0 * buffer_[n_ / 2].real();
}

Spectrum Dealiaser::values_to_full(std::span<const double> values) const {
  return fine_.forward(values);
}

Spectrum Dealiaser::product(std::span<const Complex> a, std::span<const Complex> b) const {
  std::vector<double> va, vb;
  pad_to_values(a, va);
  pad_to_values(b, vb);
  for (std::size_t j = 0; j < va.size(); ++j) va[j] *= vb[j];
  Spectrum out;
  values_to_truncated(va, out);
  return out;
}

}  // namespace spectral

namespace {

void require_finite(const Field& u, const char* where) {
  if (!u.is_finite()) throw std::domain_error(std::string(where) + ": non-finite input samples");
}

}  // namespace

Field apply_multiplier(const Field& u, const Symbol& sym) {
  require_finite(u, "apply_multiplier");
  Spectrum c = u.spectrum();
  spectral::multiply(c, sym.weights(u.grid()));
  return Field::from_spectrum(u.grid_ptr(), c);
}

Field derivative(const Field& u) {
  require_finite(u, "derivative");
  Spectrum c = u.spectrum();
  spectral::differentiate(c, u.grid());
  return Field::from_spectrum(u.grid_ptr(), c);
}

double sobolev_norm(const Field& u, double t) {
  const Spectrum c = u.spectrum();
  return std::sqrt(
      spectral::weighted_norm2(c, Symbol::bessel(2.0 * t).weights(u.grid()), u.grid().length()));
}

double inner(const Field& u, const Field& v) {
  require_same_grid(u, v);
  double sum = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) sum += u[j] * v[j];
  return sum * u.grid().spacing();
}

Field dealiased_product(const Field& u, const Field& v) {
  require_same_grid(u, v);
  spectral::Dealiaser d(u.grid().points());
  return Field::from_spectrum(u.grid_ptr(), d.product(u.spectrum(), v.spectrum()));
}

}  // namespace solwave
